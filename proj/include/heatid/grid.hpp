#pragma once

// Uniform effusivity grid. The lower bound is exclusive: the default range
// (0, 4.0e4] splits into 500 intervals and every interval is represented by
// its midpoint, which keeps all evaluated effusivities strictly positive.

namespace heatid {

struct EffusivityGrid {
  double e_min = 0.0;
  double e_max = 4.0e4;
  int n_intervals = 500;

  double width() const { return (e_max - e_min) / n_intervals; }
  double midpoint(int i) const { return e_min + (i + 0.5) * width(); }
  // (lower(i), upper(i)] is interval i.
  double lower(int i) const { return e_min + i * width(); }
  double upper(int i) const { return e_min + (i + 1) * width(); }

  void validate() const;
};

}  // namespace heatid

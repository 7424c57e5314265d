#include "heatid/grid.hpp"

#include <cmath>

#include "heatid/errors.hpp"

namespace heatid {

void EffusivityGrid::validate() const {
  if (!std::isfinite(e_min) || !std::isfinite(e_max))
    throw DomainError("grid bounds must be finite");
  if (e_min < 0.0) throw DomainError("grid e_min must be >= 0 (lower edge is exclusive)");
  if (!(e_min < e_max)) throw DomainError("grid needs e_min < e_max");
  if (n_intervals < 2) throw DomainError("grid needs at least 2 intervals");
}

}  // namespace heatid

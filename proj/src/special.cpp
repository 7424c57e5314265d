#include "heatid/special.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "heatid/errors.hpp"

namespace heatid {

namespace {

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) throw DomainError(std::string(name) + " must be finite");
}

double ln_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

// Continued fraction for the incomplete beta function (modified Lentz).
// Converges fast when x < (a+1)/(a+b+2); the caller flips via symmetry
// otherwise.
double beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 400;
  constexpr double kEps = 3e-16;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  throw ConvergenceError("incomplete beta continued fraction stalled", h, kMaxIter);
}

// Unchecked core; domain validation happens once at the public entry points.
double reg_inc_beta_core(double x, double a, double b) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front = a * std::log(x) + b * std::log1p(-x) - ln_beta(a, b);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return std::exp(ln_front) * beta_cf(a, b, x) / a;
  }
  return 1.0 - std::exp(ln_front) * beta_cf(b, a, 1.0 - x) / b;
}

}  // namespace

double erfc(double z) {
  require_finite(z, "erfc argument");
  return std::erfc(z);
}

double reg_inc_beta(double x, double a, double b) {
  require_finite(x, "reg_inc_beta x");
  require_finite(a, "reg_inc_beta a");
  require_finite(b, "reg_inc_beta b");
  if (x < 0.0 || x > 1.0) throw DomainError("reg_inc_beta x must lie in [0, 1]");
  if (a <= 0.0 || b <= 0.0) throw DomainError("reg_inc_beta shape parameters must be positive");
  return reg_inc_beta_core(x, a, b);
}

double noncentral_f_cdf(double f, double d1, double d2, double lambda, SeriesTolerance tol) {
  require_finite(f, "noncentral_f_cdf f");
  require_finite(d1, "noncentral_f_cdf d1");
  require_finite(d2, "noncentral_f_cdf d2");
  require_finite(lambda, "noncentral_f_cdf lambda");
  if (f < 0.0) throw DomainError("noncentral_f_cdf f must be >= 0");
  if (d1 < 1.0 || d2 < 1.0) throw DomainError("noncentral_f_cdf needs d1, d2 >= 1");
  if (lambda < 0.0) throw DomainError("noncentral_f_cdf lambda must be >= 0");
  if (tol.abs_term_cutoff <= 0.0 || tol.max_terms < 1)
    throw DomainError("noncentral_f_cdf tolerance must have positive cutoff and max_terms >= 1");

  if (f == 0.0) return 0.0;
  const double x = d1 * f / (d1 * f + d2);
  const double a = 0.5 * d1;
  const double b = 0.5 * d2;
  const double c = 0.5 * lambda;  // Poisson weight parameter
  if (c == 0.0) return reg_inc_beta_core(x, a, b);

  // Low-weight terms left of the mode contribute less than the Poisson mass
  // below j0, which is < 1e-15 at 8 standard deviations.
  long j0 = 0;
  if (c > 25.0) j0 = static_cast<long>(std::max(std::floor(c - 8.0 * std::sqrt(c)), 0.0));

  const double a0 = a + static_cast<double>(j0);
  double beta_term = reg_inc_beta_core(x, a0, b);
  // g_k = x^(a0+k) (1-x)^b / ((a0+k) B(a0+k, b)), the step between successive
  // incomplete beta terms: I_x(a0+k+1, b) = I_x(a0+k, b) - g_k.
  double g = std::exp(a0 * std::log(x) + b * std::log1p(-x) - ln_beta(a0, b) - std::log(a0));
  double q = std::exp(-c + static_cast<double>(j0) * std::log(c) -
                      std::lgamma(static_cast<double>(j0) + 1.0));
  double weight_mass = q;
  double sum = 0.0;
  long j = j0;
  long terms = 0;
  for (;;) {
    sum += q * beta_term;
    ++terms;
    double next_beta = beta_term - g;
    if (next_beta < 0.0) next_beta = 0.0;

    const bool past_mode = static_cast<double>(j) >= c;
    if (past_mode && q * beta_term < tol.abs_term_cutoff) break;
    // Beta terms decrease in j, so everything still unsummed is bounded by
    // next_beta times the leftover Poisson mass.
    const double leftover = std::max(1.0 - weight_mass, 0.0);
    if (next_beta * leftover < 0.1 * tol.abs_term_cutoff) break;
    if (terms >= tol.max_terms)
      throw ConvergenceError("noncentral F CDF series exhausted its term budget", sum, terms);

    beta_term = next_beta;
    g *= x * (a0 + b + static_cast<double>(j - j0)) / (a0 + static_cast<double>(j - j0) + 1.0);
    ++j;
    q *= c / static_cast<double>(j);
    weight_mass += q;
  }
  return std::clamp(sum, 0.0, 1.0);
}

}  // namespace heatid

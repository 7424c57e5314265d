#pragma once

// Special functions behind the closed-form F1 score: complementary error
// function, regularized incomplete beta, and the noncentral F CDF evaluated
// as a Poisson-weighted series of incomplete beta terms.

namespace heatid {

struct SeriesTolerance {
  double abs_term_cutoff = 1e-12;
  long max_terms = 10000;
};

// 2/sqrt(pi) * integral_z^inf exp(-r^2) dr. Thin checked wrapper over the
// standard library implementation.
double erfc(double z);

// I_x(a, b), the regularized incomplete beta function, by continued fraction
// with the usual symmetry switch at x > (a+1)/(a+b+2).
double reg_inc_beta(double x, double a, double b);

// P(F <= f) for F noncentral-F distributed with d1, d2 degrees of freedom and
// noncentrality lambda. Series of I_x(d1/2 + j, d2/2) terms with Poisson
// weights exp(-lambda/2) (lambda/2)^j / j!, summed forward from the weight
// mode so huge lambda stays within the term budget. Throws ConvergenceError
// (carrying the partial sum and term count) if tol.max_terms is exhausted.
double noncentral_f_cdf(double f, double d1, double d2, double lambda,
                        SeriesTolerance tol = {});

}  // namespace heatid

#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace rmt {

// Adaptive Gauss-Kronrod (G7,K15) on [a,b]. tol is treated as an absolute
// target mixed with |I|*tol relative.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-10, int max_depth = 40);

// Regularized incomplete gamma functions, a > 0, x >= 0.
// gamma_p = P(a,x) (lower), gamma_q = Q(a,x) (upper); the _log variants stay
// accurate when the value underflows.
double gamma_p(double a, double x);
double gamma_q(double a, double x);
double log_gamma_p(double a, double x);
double log_gamma_q(double a, double x);

// P(Poisson(lambda) <= k) = Q(k+1, lambda).
double poisson_cdf(long k, double lambda);

// sqrt on the cut plane C \ [0,+inf) with sqrt(-1) = +i (argument in (0,2pi),
// result in the closed upper half plane).
std::complex<double> sqrt_cut_positive_real(std::complex<double> w);

// Golden-section maximization of a concave function on [lo,hi].
double golden_maximize(const std::function<double(double)>& f, double lo, double hi,
                       int iters = 96);

// Two-sided Kolmogorov-Smirnov statistic of sorted samples against a CDF.
double ks_statistic(std::span<const double> sorted_samples,
                    const std::function<double(double)>& cdf);

}  // namespace rmt

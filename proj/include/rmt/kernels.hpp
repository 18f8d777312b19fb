#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <vector>

#include "rmt/errors.hpp"
#include "rmt/rng.hpp"

namespace rmt {

// Which determinantal kernel a correlation query refers to.
struct KernelSpec {
  enum class Family { gue_hermite, ginibre_finite, ginibre_infinite };
  Family family;
  int n = 0;  // ignored for ginibre_infinite
};

// GUE kernel K_N^H(x,y) = sqrt(g(x)g(y)) sum_{l<N} H_l(x)H_l(y)/(sqrt(2pi) l!),
// evaluated by Christoffel-Darboux away from the diagonal and by the direct
// sum within |x-y| <= 1e-6. N <= 500.
double gue_kernel(int n, double x, double y);

// One-point marginal density K_N^H(x,x)/N.
double gue_density1(int n, double x);

// Joint eigenvalue density of the GUE (exchangeable vector), log-space.
double gue_eigen_density(std::span<const double> lambda);

// Ginibre one-point density gamma(z) e_N(|z|^2) / N, computed as the
// regularized upper incomplete gamma Q(N,|z|^2)/(pi N) so it never overflows.
double ginibre_density1(int n, std::complex<double> z);

std::complex<double> ginibre_kernel(int n, std::complex<double> z, std::complex<double> w);
std::complex<double> ginibre_kernel_infinite(std::complex<double> z, std::complex<double> w);

// Gap |e_N(Nz) - exp(Nz) 1_{|z|<=1}| together with the truncated-exponential
// tail bound r_N(z); rejects an epsilon band around |z| = 1 where the bound
// degenerates.
struct TruncatedExpGap {
  double gap;
  double bound;
};
TruncatedExpGap truncated_exp_gap(int n, std::complex<double> z);

// Exact-law Ginibre moduli: Z_k = sqrt(Gamma(k,1)), uniformly permuted.
template <class Rng>
std::vector<double> sample_ginibre_moduli(int n, Rng& rng) {
  if (n < 1) throw invalid_argument("sample_ginibre_moduli: n must be >= 1");
  std::vector<double> z(n);
  for (int k = 1; k <= n; ++k) z[k - 1] = std::sqrt(rng.gamma(static_cast<double>(k)));
  for (int i = n - 1; i > 0; --i) {
    int j = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(i + 1));
    std::swap(z[i], z[j]);
  }
  return z;
}

// log P(no point of the infinite Ginibre ensemble in B(0,r)) =
// sum_{k<=K} log Q(k, r^2), with a certified bound on the discarded tail.
struct HoleProbability {
  double log_prob;
  double tail_bound;
  int truncation;
};
int hole_probability_default_truncation(double r);
HoleProbability hole_probability(double r);
HoleProbability hole_probability(double r, int truncation);

// Affine rescaling under which the Ginibre spectral radius fluctuations
// converge to the Gumbel law.
struct GumbelRescale {
  int n;
  double kappa;   // log(n/2pi) - 2 log log n
  double center;  // 1 + sqrt(kappa/4n)
  double scale;   // sqrt(4 n kappa)
  explicit GumbelRescale(int n);
  double operator()(double rho) const { return scale * (rho - center); }
};

// det [K(z_i,z_j)] for up to 12 points; GUE points must be real.
double correlation_det(const KernelSpec& spec, std::span<const std::complex<double>> points);

}  // namespace rmt

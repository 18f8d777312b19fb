#include "rmt/kernels.hpp"

#include <cmath>

#include "rmt/hermite.hpp"
#include "rmt/numerics.hpp"

namespace rmt {

namespace {

void check_gue_n(int n) {
  if (n < 1) throw invalid_argument("gue kernel: N must be >= 1");
  if (n > 500) throw invalid_argument("gue kernel: N above 500 unsupported");
}

}  // namespace

double gue_kernel(int n, double x, double y) {
  check_gue_n(n);
  if (std::abs(x - y) > 1e-6) {
    // Christoffel-Darboux: K = sqrt(N) (h_N(x)h_{N-1}(y) - h_N(y)h_{N-1}(x))/(x-y)
    auto hx = hermite_normalized_all(n, x);
    auto hy = hermite_normalized_all(n, y);
    return std::sqrt(static_cast<double>(n)) *
           (hx[n] * hy[n - 1] - hy[n] * hx[n - 1]) / (x - y);
  }
  auto hx = hermite_normalized_all(n - 1, x);
  auto hy = hermite_normalized_all(n - 1, y);
  double s = 0.0;
  for (int l = 0; l < n; ++l) s += hx[l] * hy[l];
  return s;
}

double gue_density1(int n, double x) {
  check_gue_n(n);
  auto h = hermite_normalized_all(n - 1, x);
  double s = 0.0;
  for (int l = 0; l < n; ++l) s += h[l] * h[l];
  return s / n;
}

double gue_eigen_density(std::span<const double> lambda) {
  const int n = static_cast<int>(lambda.size());
  if (n < 1) throw invalid_argument("gue_eigen_density: empty vector");
  double logv = -0.5 * n * std::log(2.0 * M_PI);
  for (int k = 1; k <= n; ++k) logv -= std::lgamma(static_cast<double>(k + 1));
  for (int i = 0; i < n; ++i) {
    logv -= 0.5 * lambda[i] * lambda[i];
    for (int j = i + 1; j < n; ++j) {
      double d = std::abs(lambda[j] - lambda[i]);
      if (d == 0.0) return 0.0;
      logv += 2.0 * std::log(d);
    }
  }
  return std::exp(logv);
}

double ginibre_density1(int n, std::complex<double> z) {
  if (n < 1) throw invalid_argument("ginibre_density1: N must be >= 1");
  // gamma(z) e_N(|z|^2)/N = P(Poisson(|z|^2) <= N-1) / (pi N) = Q(N,|z|^2)/(pi N)
  double x = std::norm(z);
  return std::exp(log_gamma_q(static_cast<double>(n), x)) / (M_PI * n);
}

std::complex<double> ginibre_kernel(int n, std::complex<double> z, std::complex<double> w) {
  if (n < 1) throw invalid_argument("ginibre_kernel: N must be >= 1");
  std::complex<double> zw = z * std::conj(w);
  double half = 0.5 * (std::norm(z) + std::norm(w));
  if (zw == 0.0) return std::exp(-half) / M_PI;
  // term_l = exp(l log(zw) - lgamma(l+1) - half); |zw| <= half keeps the real
  // exponents nonpositive near the peak
  double lr = std::log(std::abs(zw));
  double th = std::arg(zw);
  std::complex<double> s = 0.0;
  for (int l = 0; l < n; ++l) {
    double re = l * lr - std::lgamma(static_cast<double>(l + 1)) - half;
    s += std::polar(std::exp(re), l * th);
  }
  return s / M_PI;
}

std::complex<double> ginibre_kernel_infinite(std::complex<double> z, std::complex<double> w) {
  return std::exp(z * std::conj(w) - 0.5 * std::norm(z) - 0.5 * std::norm(w)) / M_PI;
}

TruncatedExpGap truncated_exp_gap(int n, std::complex<double> z) {
  if (n < 1 || n > 500) throw invalid_argument("truncated_exp_gap: need 1 <= N <= 500");
  const double az = std::abs(z);
  if (std::abs(az - 1.0) <= 1e-6)
    throw edge_degenerate_error("truncated_exp_gap: bound degenerates at |z| = 1");

  const double nd = static_cast<double>(n);
  // r_N(z) = e^N/sqrt(2 pi N) |z|^N * branch factor
  double log_lead = nd + nd * std::log(az) - 0.5 * std::log(2.0 * M_PI * nd);
  double factor = az < 1.0 ? (nd + 1.0) / (nd * (1.0 - az) + 1.0)
                           : nd / (nd * (az - 1.0) + 1.0);
  double bound = std::exp(log_lead) * factor;

  const double theta = std::arg(z);
  double gap;
  if (az < 1.0) {
    // tail sum_{k>=N} (Nz)^k/k!, scaled by its first term
    double l0 = nd * std::log(nd * az) - std::lgamma(nd + 1.0);
    std::complex<double> t = std::polar(1.0, nd * theta);
    std::complex<double> total = t;
    std::complex<double> nz = nd * z;
    for (int j = 0; j < 2000000; ++j) {
      t *= nz / (nd + 1.0 + j);
      total += t;
      if (std::abs(t) < 1e-18 * std::abs(total)) break;
    }
    gap = std::exp(l0 + std::log(std::abs(total)));
  } else {
    // |e_N(Nz)| via the partial sum scaled by its largest term
    double lr = std::log(nd * az);
    double lmax = -1e300;
    for (int k = 0; k < n; ++k)
      lmax = std::max(lmax, k * lr - std::lgamma(static_cast<double>(k + 1)));
    std::complex<double> total = 0.0;
    for (int k = 0; k < n; ++k) {
      double re = k * lr - std::lgamma(static_cast<double>(k + 1)) - lmax;
      total += std::polar(std::exp(re), k * theta);
    }
    gap = std::exp(lmax + std::log(std::abs(total)));
  }
  return {gap, bound};
}

int hole_probability_default_truncation(double r) {
  return static_cast<int>(std::ceil(4.0 * r * r)) + 50;
}

HoleProbability hole_probability(double r) {
  return hole_probability(r, hole_probability_default_truncation(r));
}

HoleProbability hole_probability(double r, int truncation) {
  if (!(r > 0.0)) throw invalid_argument("hole_probability: r must be > 0");
  const double x = r * r;
  if (truncation < 2.0 * x)
    throw truncation_error("hole_probability: truncation below 2 r^2");
  double log_prob = 0.0;
  for (int k = 1; k <= truncation; ++k)
    log_prob += log_gamma_q(static_cast<double>(k), x);
  // tail: |log Q(k,x)| <= 2 P(k,x) for P <= 1/2, and P(k+1,x) <= P(k,x) x/(k+1),
  // so the discarded sum is dominated by a geometric series from k = K+1
  double p_first = std::exp(log_gamma_p(static_cast<double>(truncation + 1), x));
  double ratio = x / (truncation + 2.0);
  double tail = 2.0 * p_first / (1.0 - ratio);
  return {log_prob, tail, truncation};
}

GumbelRescale::GumbelRescale(int n_) : n(n_) {
  if (n < 15) throw invalid_argument("gumbel_rescale: kappa undefined for N < 15");
  double nd = static_cast<double>(n);
  kappa = std::log(nd / (2.0 * M_PI)) - 2.0 * std::log(std::log(nd));
  if (!(kappa > 0.0))
    throw invalid_argument("gumbel_rescale: kappa_N <= 0 at this N (first positive near N=164)");
  center = 1.0 + std::sqrt(kappa / (4.0 * nd));
  scale = std::sqrt(4.0 * nd * kappa);
}

double correlation_det(const KernelSpec& spec, std::span<const std::complex<double>> points) {
  const int k = static_cast<int>(points.size());
  if (k < 1) throw invalid_argument("correlation_det: need at least one point");
  if (k > 12) throw invalid_argument("correlation_det: more than 12 points unsupported");
  if (spec.family == KernelSpec::Family::gue_hermite) {
    for (auto p : points)
      if (p.imag() != 0.0) throw invalid_argument("correlation_det: GUE points must be real");
    Eigen::MatrixXd m(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j)
        m(i, j) = gue_kernel(spec.n, points[i].real(), points[j].real());
    return m.determinant();
  }
  Eigen::MatrixXcd m(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      m(i, j) = spec.family == KernelSpec::Family::ginibre_finite
                    ? ginibre_kernel(spec.n, points[i], points[j])
                    : ginibre_kernel_infinite(points[i], points[j]);
  return m.determinant().real();
}

}  // namespace rmt

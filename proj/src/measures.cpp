#include "rmt/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rmt/numerics.hpp"

namespace rmt {

void GridMeasure::validate() const {
  if (nodes.size() < 2 || masses.size() + 1 != nodes.size())
    throw invalid_argument("GridMeasure: need m+1 nodes for m cells, m >= 1");
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
    if (!(nodes[i] < nodes[i + 1]))
      throw invalid_argument("GridMeasure: nodes must be strictly increasing");
  double total = 0.0;
  for (double m : masses) {
    if (m < 0.0) throw invalid_argument("GridMeasure: negative cell mass");
    total += m;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw invalid_argument("GridMeasure: masses must sum to 1 within 1e-12");
}

EmpiricalMeasure empirical_from_spectrum(const Spectrum& s, double scale) {
  if (s.values.empty()) throw invalid_argument("empirical_from_spectrum: empty spectrum");
  if (!(scale > 0.0)) throw invalid_argument("empirical_from_spectrum: scale must be > 0");
  EmpiricalMeasure mu;
  mu.atoms.reserve(s.values.size());
  for (double v : s.values) mu.atoms.push_back(v * scale);
  std::sort(mu.atoms.begin(), mu.atoms.end());
  return mu;
}

PlanarEmpiricalMeasure empirical_from_spectrum(const ComplexSpectrum& s, double scale) {
  if (s.values.empty()) throw invalid_argument("empirical_from_spectrum: empty spectrum");
  PlanarEmpiricalMeasure mu;
  mu.atoms.reserve(s.values.size());
  for (auto v : s.values) mu.atoms.push_back(v * scale);
  return mu;
}

ReferenceLaw ReferenceLaw::semicircle_beta(double beta) {
  if (!(beta > 0.0)) throw invalid_argument("semicircle_beta: beta must be > 0");
  return {Kind::semicircle_beta, beta};
}

ReferenceLaw ReferenceLaw::ou_limit(double theta) {
  if (!(theta > 0.0)) throw invalid_argument("ou_limit: theta must be > 0");
  return {Kind::ou_limit, theta};
}

ReferenceLaw ReferenceLaw::marchenko_pastur(double c) {
  if (!(c > 0.0)) throw invalid_argument("marchenko_pastur: c must be > 0");
  return {Kind::marchenko_pastur, c};
}

namespace {

// sigma_b(x) = sqrt(2b - x^2) / (b*pi) on [-sqrt(2b), sqrt(2b)];
// sigma = sigma_2, sigma_theta = sigma_{1/theta}.
double semicircle_beta_of(ReferenceLaw::Kind k, double p) {
  switch (k) {
    case ReferenceLaw::Kind::semicircle: return 2.0;
    case ReferenceLaw::Kind::semicircle_beta: return p;
    case ReferenceLaw::Kind::ou_limit: return 1.0 / p;
    default: return 0.0;
  }
}

}  // namespace

double ReferenceLaw::density(double x) const {
  switch (kind_) {
    case Kind::semicircle:
    case Kind::semicircle_beta:
    case Kind::ou_limit: {
      double b = semicircle_beta_of(kind_, param_);
      double v = 2.0 * b - x * x;
      return v > 0.0 ? std::sqrt(v) / (b * M_PI) : 0.0;
    }
    case Kind::marchenko_pastur: {
      double c = param_;
      double lo = (1.0 - std::sqrt(c)) * (1.0 - std::sqrt(c));
      double hi = (1.0 + std::sqrt(c)) * (1.0 + std::sqrt(c));
      if (x <= lo || x >= hi || x <= 0.0) return 0.0;
      return std::sqrt((hi - x) * (x - lo)) / (2.0 * M_PI * c * x);
    }
    case Kind::gumbel: {
      double e = std::exp(-x);
      return e * std::exp(-e);
    }
    case Kind::circular:
      throw invalid_argument("circular law density needs a complex argument");
  }
  return 0.0;
}

double ReferenceLaw::density(std::complex<double> z) const {
  if (kind_ == Kind::circular) return std::abs(z) <= 1.0 ? 1.0 / M_PI : 0.0;
  if (z.imag() != 0.0) throw invalid_argument("real-line law evaluated off the real axis");
  return density(z.real());
}

double ReferenceLaw::atom_mass_at_zero() const {
  if (kind_ == Kind::marchenko_pastur && param_ > 1.0) return 1.0 - 1.0 / param_;
  return 0.0;
}

std::pair<double, double> ReferenceLaw::support() const {
  switch (kind_) {
    case Kind::semicircle:
    case Kind::semicircle_beta:
    case Kind::ou_limit: {
      double a = std::sqrt(2.0 * semicircle_beta_of(kind_, param_));
      return {-a, a};
    }
    case Kind::marchenko_pastur: {
      double s = std::sqrt(param_);
      return {(1.0 - s) * (1.0 - s), (1.0 + s) * (1.0 + s)};
    }
    case Kind::gumbel:
      return {-4.0, 40.0};  // effective support for quadrature
    case Kind::circular:
      throw invalid_argument("circular law has planar support");
  }
  return {0.0, 0.0};
}

double ReferenceLaw::cdf(double x) const {
  switch (kind_) {
    case Kind::semicircle:
    case Kind::semicircle_beta:
    case Kind::ou_limit: {
      double b = semicircle_beta_of(kind_, param_);
      double a = std::sqrt(2.0 * b);
      if (x <= -a) return 0.0;
      if (x >= a) return 1.0;
      return 0.5 + x * std::sqrt(2.0 * b - x * x) / (2.0 * b * M_PI) +
             std::asin(x / a) / M_PI;
    }
    case Kind::gumbel:
      return std::exp(-std::exp(-x));
    case Kind::marchenko_pastur: {
      auto [lo, hi] = support();
      double atom = x >= 0.0 ? atom_mass_at_zero() : 0.0;
      if (x <= lo) return atom;
      double xm = std::min(x, hi);
      return atom + integrate([this](double t) { return density(t); }, lo, xm, 1e-10);
    }
    case Kind::circular:
      throw invalid_argument("circular law has no real-line CDF");
  }
  return 0.0;
}

GridMeasure ReferenceLaw::discretize(int cells) const {
  if (cells < 1) throw invalid_argument("discretize: need at least one cell");
  if (kind_ == Kind::circular) throw invalid_argument("discretize: planar law");
  auto [lo, hi] = support();
  GridMeasure g;
  g.nodes.resize(cells + 1);
  g.masses.resize(cells);
  for (int i = 0; i <= cells; ++i)
    g.nodes[i] = lo + (hi - lo) * static_cast<double>(i) / cells;
  double atom = atom_mass_at_zero();
  for (int i = 0; i < cells; ++i) {
    if (kind_ == Kind::marchenko_pastur) {
      g.masses[i] = integrate([this](double t) { return density(t); }, g.nodes[i],
                              g.nodes[i + 1], 1e-12);
    } else {
      g.masses[i] = cdf(g.nodes[i + 1]) - cdf(g.nodes[i]);
    }
    if (atom > 0.0 && g.nodes[i] <= 0.0 && 0.0 < g.nodes[i + 1]) g.masses[i] += atom;
  }
  double total = std::accumulate(g.masses.begin(), g.masses.end(), 0.0);
  for (double& m : g.masses) m /= total;
  g.validate();
  return g;
}

namespace {

void check_moment_order(int k) {
  if (k < 0) throw invalid_argument("moment: order must be >= 0");
  if (k > 30) throw invalid_argument("moment: order above 30 unsupported");
}

}  // namespace

double moment(const EmpiricalMeasure& mu, int k) {
  check_moment_order(k);
  if (mu.atoms.empty()) throw invalid_argument("moment: empty measure");
  double s = 0.0;
  for (double a : mu.atoms) s += std::pow(a, k);
  return s / static_cast<double>(mu.atoms.size());
}

double moment(const GridMeasure& mu, int k) {
  check_moment_order(k);
  double s = 0.0;
  for (int i = 0; i < mu.cells(); ++i) {
    double l = mu.nodes[i], r = mu.nodes[i + 1];
    double avg = (std::pow(r, k + 1) - std::pow(l, k + 1)) / ((k + 1) * (r - l));
    s += mu.masses[i] * avg;
  }
  return s;
}

double moment(const ReferenceLaw& law, int k) {
  check_moment_order(k);
  switch (law.kind()) {
    case ReferenceLaw::Kind::semicircle:
    case ReferenceLaw::Kind::semicircle_beta:
    case ReferenceLaw::Kind::ou_limit: {
      if (k % 2 == 1) return 0.0;
      double b = law.kind() == ReferenceLaw::Kind::semicircle ? 2.0
                 : law.kind() == ReferenceLaw::Kind::semicircle_beta ? law.param()
                                                                     : 1.0 / law.param();
      // sigma_b is sigma pushed through x -> sqrt(b/2) x, so m_{2p} = (b/2)^p C_p.
      return std::pow(b / 2.0, k / 2) * static_cast<double>(catalan(k / 2));
    }
    case ReferenceLaw::Kind::marchenko_pastur:
    case ReferenceLaw::Kind::gumbel: {
      auto [lo, hi] = law.support();
      double cont = integrate([&](double x) { return std::pow(x, k) * law.density(x); },
                              lo, hi, 1e-11);
      return cont + (k == 0 ? law.atom_mass_at_zero() : 0.0);
    }
    case ReferenceLaw::Kind::circular:
      throw invalid_argument("moment: planar law unsupported");
  }
  return 0.0;
}

std::int64_t catalan(int p) {
  if (p < 0) throw invalid_argument("catalan: p must be >= 0");
  if (p > 30) throw invalid_argument("catalan: order above 30 unsupported");
  std::vector<std::int64_t> c(p + 1, 0);
  c[0] = 1;
  for (int n = 0; n < p; ++n) {
    std::int64_t s = 0;
    for (int k = 0; k <= n; ++k) s += c[k] * c[n - k];
    c[n + 1] = s;
  }
  return c[p];
}

namespace {

// Value of  max sum_i c_i f(x_i)  over f with ||f||_inf <= 1-b and Lipschitz
// constant <= b, by dynamic programming on the concave piecewise-linear value
// function V_i(g) = best objective over f_1..f_i with f_i = g.
double bl_inner(std::span<const double> pts, std::span<const double> cs, double b) {
  const double a = 1.0 - b;
  if (a <= 0.0) return 0.0;
  const std::size_t m = pts.size();
  std::vector<double> X{-a, a}, Y{cs[0] * -a, cs[0] * a};
  std::vector<double> X2, Y2;
  auto interp = [](const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    auto it = std::lower_bound(xs.begin(), xs.end(), x);
    if (it == xs.begin()) return ys.front();
    if (it == xs.end()) return ys.back();
    std::size_t j = static_cast<std::size_t>(it - xs.begin());
    double t = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
    return ys[j - 1] + t * (ys[j] - ys[j - 1]);
  };
  for (std::size_t i = 1; i < m; ++i) {
    const double s = b * (pts[i] - pts[i - 1]);
    // sliding-window max of a concave function: shift the rising part left by
    // s, the falling part right by s, flat in between
    std::size_t k = 0;
    for (std::size_t j = 1; j < Y.size(); ++j)
      if (Y[j] > Y[k]) k = j;
    X2.clear();
    Y2.clear();
    for (std::size_t j = 0; j <= k; ++j) {
      X2.push_back(X[j] - s);
      Y2.push_back(Y[j]);
    }
    for (std::size_t j = k; j < X.size(); ++j) {
      X2.push_back(X[j] + s);
      Y2.push_back(Y[j]);
    }
    // clip the domain back to [-a,a] and add the next linear term
    X.clear();
    Y.clear();
    X.push_back(-a);
    Y.push_back(interp(X2, Y2, -a));
    for (std::size_t j = 0; j < X2.size(); ++j) {
      if (X2[j] > -a && X2[j] < a) {
        X.push_back(X2[j]);
        Y.push_back(Y2[j]);
      }
    }
    X.push_back(a);
    Y.push_back(interp(X2, Y2, a));
    const double ci = cs[i];
    for (std::size_t j = 0; j < X.size(); ++j) Y[j] += ci * X[j];
  }
  return *std::max_element(Y.begin(), Y.end());
}

}  // namespace

BlResult bl_distance_full(std::span<const double> points, std::span<const double> signed_mass) {
  if (points.size() != signed_mass.size())
    throw invalid_argument("bl_distance: points/mass size mismatch");
  // merge duplicates, drop zero-mass points
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return points[i] < points[j]; });
  std::vector<double> pts, cs;
  pts.reserve(points.size());
  cs.reserve(points.size());
  for (std::size_t idx : order) {
    if (!pts.empty() && points[idx] == pts.back())
      cs.back() += signed_mass[idx];
    else {
      pts.push_back(points[idx]);
      cs.push_back(signed_mass[idx]);
    }
  }
  // trim exact zeros at either end; interior zeros are harmless
  while (!pts.empty() && cs.back() == 0.0) {
    pts.pop_back();
    cs.pop_back();
  }
  std::size_t head = 0;
  while (head < pts.size() && cs[head] == 0.0) ++head;
  pts.erase(pts.begin(), pts.begin() + head);
  cs.erase(cs.begin(), cs.begin() + head);
  if (pts.size() <= 1) return {0.0, true};

  if (pts.size() > 10000) {
    // capped-potential fallback: fixed even split between sup and Lipschitz
    // budgets; a guaranteed lower bound on the exact LP value
    return {bl_inner(pts, cs, 0.5), false};
  }
  double v = golden_maximize([&](double b) { return bl_inner(pts, cs, b); }, 0.0, 1.0, 80);
  return {v, true};
}

namespace {

void append_measure(const EmpiricalMeasure& mu, double sign, std::vector<double>& pts,
                    std::vector<double>& cs) {
  if (mu.atoms.empty()) throw invalid_argument("bl_distance: empty measure");
  double w = sign / static_cast<double>(mu.atoms.size());
  for (double a : mu.atoms) {
    pts.push_back(a);
    cs.push_back(w);
  }
}

void append_measure(const GridMeasure& mu, double sign, std::vector<double>& pts,
                    std::vector<double>& cs) {
  mu.validate();
  for (int i = 0; i < mu.cells(); ++i) {
    pts.push_back(mu.cell_center(i));
    cs.push_back(sign * mu.masses[i]);
  }
}

template <class A, class B>
double bl_impl(const A& a, const B& b) {
  std::vector<double> pts, cs;
  append_measure(a, 1.0, pts, cs);
  append_measure(b, -1.0, pts, cs);
  return bl_distance_full(pts, cs).value;
}

}  // namespace

double bl_distance(const EmpiricalMeasure& a, const EmpiricalMeasure& b) { return bl_impl(a, b); }
double bl_distance(const EmpiricalMeasure& a, const GridMeasure& b) { return bl_impl(a, b); }
double bl_distance(const GridMeasure& a, const EmpiricalMeasure& b) { return bl_impl(a, b); }
double bl_distance(const GridMeasure& a, const GridMeasure& b) { return bl_impl(a, b); }

}  // namespace rmt

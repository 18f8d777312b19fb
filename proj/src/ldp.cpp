#include "rmt/ldp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rmt/rng.hpp"
#include "rmt/stieltjes.hpp"

namespace rmt {

namespace {

// g'' = log|t|; the double integral of log|x-y| over [p,q]x[r,s] is
// -[g(q-s) - g(q-r) - g(p-s) + g(p-r)].
double g2(double t) {
  if (t == 0.0) return 0.0;
  double a = std::abs(t);
  return 0.5 * t * t * std::log(a) - 0.75 * t * t;
}

double pair_log_integral(double p, double q, double r, double s) {
  return -(g2(q - s) - g2(q - r) - g2(p - s) + g2(p - r));
}

void check_grid(const GridMeasure& mu) {
  mu.validate();
  if (mu.cells() > 4096) throw invalid_argument("free_entropy: more than 4096 cells");
  if (!std::isfinite(mu.nodes.front()) || !std::isfinite(mu.nodes.back()))
    throw invalid_argument("free_entropy: unbounded support");
}

}  // namespace

double free_entropy(const GridMeasure& mu) {
  check_grid(mu);
  const int m = mu.cells();
  double total = 0.0;
  for (int a = 0; a < m; ++a) {
    if (mu.masses[a] == 0.0) continue;
    double da = mu.masses[a] / mu.cell_width(a);
    // diagonal self-cell: w^2 (log w - 3/2)
    double w = mu.cell_width(a);
    total += da * da * w * w * (std::log(w) - 1.5);
    for (int b = a + 1; b < m; ++b) {
      if (mu.masses[b] == 0.0) continue;
      double db = mu.masses[b] / mu.cell_width(b);
      total += 2.0 * da * db *
               pair_log_integral(mu.nodes[a], mu.nodes[a + 1], mu.nodes[b], mu.nodes[b + 1]);
    }
  }
  return total;
}

EnergyBreakdown energy_H(const GridMeasure& mu, double beta) {
  if (!(beta > 0.0)) throw invalid_argument("energy_H: beta must be > 0");
  double sigma = free_entropy(mu);
  double pot = 0.5 * moment(mu, 2);
  double h = -0.5 * beta * sigma + pot;
  double f = F_constant(beta);
  return {sigma, pot, h, h + f, f, beta};
}

double F_constant(double beta) {
  if (!(beta > 0.0)) throw invalid_argument("F_constant: beta must be > 0");
  return 0.25 * beta * std::log(0.5 * beta) - 0.375 * beta;
}

double selberg_log_z(int n, double beta) {
  if (n < 1) throw invalid_argument("selberg_log_z: N must be >= 1");
  if (n > 10000) throw invalid_argument("selberg_log_z: N above 10^4 unsupported");
  if (!(beta > 0.0)) throw invalid_argument("selberg_log_z: beta must be > 0");
  double nd = static_cast<double>(n);
  double v = 0.5 * nd * std::log(2.0 * M_PI);
  v -= (0.5 * nd + 0.25 * beta * nd * (nd - 1.0)) * std::log(nd);
  v -= nd * std::lgamma(1.0 + 0.5 * beta);
  for (int j = 1; j <= n; ++j) v += std::lgamma(1.0 + 0.5 * beta * j);
  return v;
}

namespace {

// int_{cell b} log|x - y| dy via G(t) = t log|t| - t (continuous through 0).
double log_potential_cell(double x, double r, double s) {
  auto G = [](double t) { return t == 0.0 ? 0.0 : t * std::log(std::abs(t)) - t; };
  return G(x - r) - G(x - s);
}

std::vector<double> grid_log_potential(const GridMeasure& mu) {
  const int m = mu.cells();
  std::vector<double> u(m, 0.0);
  for (int a = 0; a < m; ++a) {
    double x = mu.cell_center(a);
    for (int b = 0; b < m; ++b) {
      if (mu.masses[b] == 0.0) continue;
      u[a] += mu.masses[b] / mu.cell_width(b) *
              log_potential_cell(x, mu.nodes[b], mu.nodes[b + 1]);
    }
  }
  return u;
}

constexpr double kMassTol = 1e-6;

}  // namespace

FrostmanReport frostman_residual(const GridMeasure& mu, double beta) {
  check_grid(mu);
  if (!(beta > 0.0)) throw invalid_argument("frostman_residual: beta must be > 0");
  auto u = grid_log_potential(mu);
  const int m = mu.cells();
  double c_sum = 0.0;
  int on_support = 0;
  for (int a = 0; a < m; ++a) {
    if (mu.masses[a] <= kMassTol) continue;
    double x = mu.cell_center(a);
    c_sum += beta * u[a] - 0.5 * x * x;
    ++on_support;
  }
  if (on_support < 2)
    throw invalid_argument(
        "frostman_residual: effective support at mass_tol too small to fit a constant");
  double c = c_sum / on_support;
  double sup = 0.0;
  int violations = 0;
  for (int a = 0; a < m; ++a) {
    double x = mu.cell_center(a);
    double lhs = beta * u[a];
    if (mu.masses[a] > kMassTol)
      sup = std::max(sup, std::abs(lhs - 0.5 * x * x - c));
    else if (lhs > 0.5 * x * x + c + 1e-6)
      ++violations;
  }
  return {c, sup, violations};
}

GridMeasure uniform_grid_measure(double lo, double hi, int cells) {
  if (!(lo < hi) || cells < 1) throw invalid_argument("uniform_grid_measure: bad grid");
  GridMeasure g;
  g.nodes.resize(cells + 1);
  for (int i = 0; i <= cells; ++i)
    g.nodes[i] = lo + (hi - lo) * static_cast<double>(i) / cells;
  g.masses.assign(cells, 1.0 / cells);
  return g;
}

std::pair<GridMeasure, EquilibriumSolveReport> solve_equilibrium(double beta,
                                                                 const GridMeasure& grid,
                                                                 int max_iters) {
  if (!(beta > 0.0)) throw invalid_argument("solve_equilibrium: beta must be > 0");
  grid.validate();
  const int m = grid.cells();
  if (m > 2048) throw invalid_argument("solve_equilibrium: more than 2048 cells");
  double edge = std::sqrt(2.0 * beta);
  if (grid.nodes.front() > -edge - 0.5 || grid.nodes.back() < edge + 0.5)
    throw invalid_argument("solve_equilibrium: grid must cover [-sqrt(2b)-0.5, sqrt(2b)+0.5]");

  // pair-averaged log kernel and cell-averaged potential
  std::vector<double> K(static_cast<std::size_t>(m) * m);
  std::vector<double> v(m);
  for (int a = 0; a < m; ++a) {
    double wa = grid.cell_width(a);
    double ca = grid.cell_center(a);
    v[a] = 0.5 * ca * ca + wa * wa / 24.0;  // avg of x^2/2 over the cell
    for (int b = a; b < m; ++b) {
      double wb = grid.cell_width(b);
      double val = a == b ? wa * wa * (std::log(wa) - 1.5) / (wa * wa)
                          : pair_log_integral(grid.nodes[a], grid.nodes[a + 1],
                                              grid.nodes[b], grid.nodes[b + 1]) /
                                (wa * wb);
      K[static_cast<std::size_t>(a) * m + b] = val;
      K[static_cast<std::size_t>(b) * m + a] = val;
    }
  }
  std::vector<double> mass(grid.masses);
  for (double& x : mass) x = std::max(x, 1e-300);
  double total = std::accumulate(mass.begin(), mass.end(), 0.0);
  for (double& x : mass) x /= total;

  auto energy_of = [&](const std::vector<double>& w) {
    double quad = 0.0, lin = 0.0;
    std::vector<double> km(m, 0.0);
    for (int a = 0; a < m; ++a) {
      double acc = 0.0;
      const double* row = &K[static_cast<std::size_t>(a) * m];
      for (int b = 0; b < m; ++b) acc += row[b] * w[b];
      km[a] = acc;
    }
    for (int a = 0; a < m; ++a) {
      quad += w[a] * km[a];
      lin += w[a] * v[a];
    }
    return std::make_pair(-0.5 * beta * quad + lin, km);
  };

  auto [e_cur, km] = energy_of(mass);
  double eta = 1.0;
  int it = 0;
  bool converged = false;
  std::vector<double> trace;
  for (; it < max_iters; ++it) {
    std::vector<double> grad(m);
    double gbar = 0.0;
    for (int a = 0; a < m; ++a) {
      grad[a] = -beta * km[a] + v[a];
      gbar += grad[a] * mass[a];
    }
    std::vector<double> cand(m);
    bool accepted = false;
    while (eta > 1e-12) {
      double z = 0.0;
      for (int a = 0; a < m; ++a) {
        double step = std::clamp(-eta * (grad[a] - gbar), -60.0, 60.0);
        cand[a] = mass[a] * std::exp(step);
        z += cand[a];
      }
      for (int a = 0; a < m; ++a) cand[a] /= z;
      auto [e_c, km_c] = energy_of(cand);
      if (e_c < e_cur) {
        mass.swap(cand);
        km.swap(km_c);
        accepted = true;
        double decrease = e_cur - e_c;
        e_cur = e_c;
        trace.push_back(e_cur);
        eta = std::min(eta * 1.3, 64.0);
        if (decrease < 1e-10) converged = true;
        break;
      }
      eta *= 0.5;
    }
    if (!accepted) {
      // multiplicative steps at the floor can no longer descend: treat a
      // strictly increasing proposal as divergence, a flat one as converged
      auto [e_c, km_c] = energy_of(cand);
      if (e_c > e_cur + 1e-9)
        throw solver_failure_error("solve_equilibrium: energy increased at step floor", trace);
      converged = true;
    }
    if (converged) break;
  }

  GridMeasure out;
  out.nodes = grid.nodes;
  out.masses = mass;
  GridMeasure ref = ReferenceLaw::semicircle_beta(beta).discretize(std::min(1024, 2 * m));
  EquilibriumSolveReport rep;
  rep.iterations = it + 1;
  rep.final_energy = e_cur;
  rep.bl_distance_to_sigma_beta = bl_distance(out, ref);
  rep.converged = converged;
  return {out, rep};
}

LdpProbeResult ldp_probe(double beta, int n, long trials, double epsilon,
                         std::uint64_t seed) {
  if (beta != 1.0 && beta != 2.0)
    throw invalid_argument("ldp_probe: only beta in {1,2} has a matrix sampler");
  if (trials < 1) throw invalid_argument("ldp_probe: trials must be >= 1");
  if (n < 1) throw invalid_argument("ldp_probe: n must be >= 1");
  GridMeasure ref = ReferenceLaw::semicircle_beta(beta).discretize(512);
  long count = 0;
  for (long t = 0; t < trials; ++t) {
    RngStream rng(seed, static_cast<std::uint64_t>(t));
    Spectrum sp = beta == 2.0 ? eigenvalues_hermitian(sample_gue(n, rng))
                              : eigenvalues_hermitian(sample_goe(n, rng));
    EmpiricalMeasure esd = empirical_from_spectrum(sp, 1.0 / std::sqrt(n));
    if (bl_distance(esd, ref) >= epsilon) ++count;
  }
  double log_freq = count == 0 ? -std::numeric_limits<double>::infinity()
                               : std::log(static_cast<double>(count) / trials) /
                                     (static_cast<double>(n) * n);
  return {log_freq, count, trials};
}

double largest_eigenvalue_rate(double x) {
  const double edge = std::sqrt(2.0);
  if (x < edge) return std::numeric_limits<double>::infinity();
  return 0.5 * x * x - log_potential_semicircle(x, 1.0) - 0.5 * (std::log(2.0) + 1.0);
}

}  // namespace rmt

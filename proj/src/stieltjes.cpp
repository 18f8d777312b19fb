#include "rmt/stieltjes.hpp"

#include <algorithm>
#include <cmath>

#include "rmt/numerics.hpp"

namespace rmt {

Complex StieltjesField::derivative(Complex z) const {
  if (deriv) return deriv(z);
  double h = 1e-6 * (1.0 + std::abs(z));
  return (eval(z + h) - eval(z - h)) / (2.0 * h);
}

namespace {

void require_offaxis(Complex z, const char* who) {
  if (z.imag() == 0.0) throw invalid_argument(std::string(who) + ": Im z must be nonzero");
}

}  // namespace

Complex stieltjes(const EmpiricalMeasure& mu, Complex z) {
  require_offaxis(z, "stieltjes");
  if (mu.atoms.empty()) throw invalid_argument("stieltjes: empty measure");
  Complex s = 0.0;
  for (double a : mu.atoms) s += 1.0 / (z - a);
  return s / static_cast<double>(mu.atoms.size());
}

Complex stieltjes(const GridMeasure& mu, Complex z) {
  require_offaxis(z, "stieltjes");
  // per cell: mass/width * [log(z - x_l) - log(z - x_r)]; z off the real axis
  // keeps the principal logs on one branch
  Complex s = 0.0;
  for (int i = 0; i < mu.cells(); ++i) {
    if (mu.masses[i] == 0.0) continue;
    Complex l = std::log(z - mu.nodes[i]) - std::log(z - mu.nodes[i + 1]);
    s += mu.masses[i] / mu.cell_width(i) * l;
  }
  return s;
}

Complex semicircle_stieltjes(Complex z) { return semicircle_beta_stieltjes(2.0, z); }

Complex semicircle_beta_stieltjes(double beta, Complex z) {
  require_offaxis(z, "semicircle_stieltjes");
  if (!(beta > 0.0)) throw invalid_argument("semicircle_beta_stieltjes: beta must be > 0");
  if (z.imag() < 0.0) return std::conj(semicircle_beta_stieltjes(beta, std::conj(z)));
  return (z - sqrt_cut_positive_real(z * z - 2.0 * beta)) / beta;
}

StieltjesField stieltjes_field(const EmpiricalMeasure& mu) {
  auto atoms = mu.atoms;
  StieltjesField f;
  f.provenance = StieltjesField::Provenance::measure_backed;
  f.eval = [atoms](Complex z) {
    Complex s = 0.0;
    for (double a : atoms) s += 1.0 / (z - a);
    return s / static_cast<double>(atoms.size());
  };
  f.deriv = [atoms](Complex z) {
    Complex s = 0.0;
    for (double a : atoms) {
      Complex d = z - a;
      s -= 1.0 / (d * d);
    }
    return s / static_cast<double>(atoms.size());
  };
  return f;
}

StieltjesField stieltjes_field(const GridMeasure& mu) {
  GridMeasure g = mu;
  g.validate();
  StieltjesField f;
  f.provenance = StieltjesField::Provenance::measure_backed;
  f.eval = [g](Complex z) { return stieltjes(g, z); };
  f.deriv = [g](Complex z) {
    Complex s = 0.0;
    for (int i = 0; i < g.cells(); ++i) {
      if (g.masses[i] == 0.0) continue;
      s += g.masses[i] / g.cell_width(i) *
           (1.0 / (z - g.nodes[i + 1]) - 1.0 / (z - g.nodes[i]));
    }
    return s;
  };
  return f;
}

StieltjesField stieltjes_field_delta0() {
  StieltjesField f;
  f.provenance = StieltjesField::Provenance::closed_form;
  f.eval = [](Complex z) { return 1.0 / z; };
  f.deriv = [](Complex z) { return -1.0 / (z * z); };
  return f;
}

StieltjesField stieltjes_field_semicircle() { return stieltjes_field_semicircle_beta(2.0); }

StieltjesField stieltjes_field_semicircle_beta(double beta) {
  if (!(beta > 0.0)) throw invalid_argument("stieltjes_field_semicircle_beta: beta > 0");
  StieltjesField f;
  f.provenance = StieltjesField::Provenance::closed_form;
  f.eval = [beta](Complex z) { return semicircle_beta_stieltjes(beta, z); };
  return f;
}

double stieltjes_invert(const StieltjesField& s, double a, double b,
                        std::span<const double> eps_seq, double tol) {
  if (!(a < b)) throw invalid_argument("stieltjes_invert: need a < b");
  static const double default_eps[4] = {1e-1, 1e-2, 1e-3, 1e-4};
  std::span<const double> eps =
      eps_seq.empty() ? std::span<const double>(default_eps, 4) : eps_seq;
  if (eps.size() < 2) throw invalid_argument("stieltjes_invert: need at least two eps");

  std::vector<double> raw;
  raw.reserve(eps.size());
  for (double e : eps) {
    raw.push_back(-integrate([&](double x) { return s.eval({x, e}).imag(); }, a, b, 1e-9) /
                  M_PI);
  }
  // first-order Richardson in eps
  std::vector<double> extr;
  for (std::size_t k = 1; k < raw.size(); ++k) {
    double e0 = eps[k - 1], e1 = eps[k];
    extr.push_back(raw[k] + (raw[k] - raw[k - 1]) * e1 / (e0 - e1));
  }
  if (extr.size() >= 2 &&
      std::abs(extr[extr.size() - 1] - extr[extr.size() - 2]) > tol) {
    std::vector<double> partial = raw;
    partial.insert(partial.end(), extr.begin(), extr.end());
    throw no_convergence_error("stieltjes_invert: extrapolation did not settle", partial);
  }
  return extr.back();
}

double hilbert_transform(const StieltjesField& s, double x) {
  const double e0 = 1e-3, e1 = 5e-4;
  double r0 = s.eval({x, e0}).real();
  double r1 = s.eval({x, e1}).real();
  return r1 + (r1 - r0) * e1 / (e0 - e1);  // = 2 r1 - r0 for e0 = 2 e1
}

double hilbert_transform(const GridMeasure& mu, double x) {
  mu.validate();
  // reject evaluation right at a node shared by a spike-like cell; a plain
  // density cell is fine
  for (int i = 0; i < mu.cells(); ++i) {
    if (x >= mu.nodes[i] && x <= mu.nodes[i + 1] &&
        mu.masses[i] / mu.cell_width(i) > 1e6)
      throw singular_point_error("hilbert_transform: atom-like cell at x");
  }
  return hilbert_transform(stieltjes_field(mu), x);
}

double log_potential_semicircle(double x, double beta) {
  if (!(beta > 0.0)) throw invalid_argument("log_potential_semicircle: beta must be > 0");
  const double edge = std::sqrt(2.0 * beta);
  const double ax = std::abs(x);
  auto inside = [beta](double t) {
    return 0.5 * std::log(beta) + (t * t / beta - std::log(2.0) - 1.0) / 2.0;
  };
  if (ax <= edge) return inside(x);
  // outside: value at the edge plus the real branch of S along the axis
  auto s_real = [beta](double t) {
    return (t - std::sqrt(t * t - 2.0 * beta)) / beta;
  };
  return inside(edge) + integrate(s_real, edge, ax, 1e-10);
}

}  // namespace rmt

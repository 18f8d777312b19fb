#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "rmt/ensembles.hpp"
#include "rmt/errors.hpp"

namespace rmt {

// Uniform atomic measure, mass 1/n per atom, atoms sorted ascending.
struct EmpiricalMeasure {
  std::vector<double> atoms;
  int n() const { return static_cast<int>(atoms.size()); }
};

struct PlanarEmpiricalMeasure {
  std::vector<std::complex<double>> atoms;
  int n() const { return static_cast<int>(atoms.size()); }
};

// Piecewise-constant density: nodes x_0 < ... < x_m, masses per cell summing
// to 1. Carrier for the energy functionals, so the log-singular integrals get
// exact per-cell corrections.
struct GridMeasure {
  std::vector<double> nodes;   // size m+1, strictly increasing
  std::vector<double> masses;  // size m, nonnegative, sum 1 (within 1e-12)
  int cells() const { return static_cast<int>(masses.size()); }
  double cell_center(int i) const { return 0.5 * (nodes[i] + nodes[i + 1]); }
  double cell_width(int i) const { return nodes[i + 1] - nodes[i]; }
  void validate() const;
};

EmpiricalMeasure empirical_from_spectrum(const Spectrum& s, double scale);
PlanarEmpiricalMeasure empirical_from_spectrum(const ComplexSpectrum& s, double scale);

// The reference limit laws used across the suite.
class ReferenceLaw {
 public:
  enum class Kind { semicircle, semicircle_beta, ou_limit, marchenko_pastur, circular, gumbel };

  static ReferenceLaw semicircle() { return {Kind::semicircle, 2.0}; }  // sigma = sigma_beta(2)
  static ReferenceLaw semicircle_beta(double beta);
  static ReferenceLaw ou_limit(double theta);
  static ReferenceLaw marchenko_pastur(double c);
  static ReferenceLaw circular() { return {Kind::circular, 0.0}; }
  static ReferenceLaw gumbel() { return {Kind::gumbel, 0.0}; }

  Kind kind() const { return kind_; }
  double param() const { return param_; }

  // Continuous part of the density at x (real-line laws).
  double density(double x) const;
  // Planar density (circular law only).
  double density(std::complex<double> z) const;
  // Atom at 0 (Marchenko-Pastur with c > 1), else 0.
  double atom_mass_at_zero() const;
  // Support of the continuous part.
  std::pair<double, double> support() const;
  // CDF where a closed form exists (semicircle family, gumbel, marchenko-pastur).
  double cdf(double x) const;
  // Histogram discretization on [support] with the stated number of cells;
  // the MP atom (if any) is added to the cell containing 0.
  GridMeasure discretize(int cells) const;

 private:
  ReferenceLaw(Kind k, double p) : kind_(k), param_(p) {}
  Kind kind_;
  double param_;
};

// k-th moment, k <= 30.
double moment(const EmpiricalMeasure& mu, int k);
double moment(const GridMeasure& mu, int k);
double moment(const ReferenceLaw& law, int k);

// Exact Catalan numbers via the convolution recurrence, p <= 30.
std::int64_t catalan(int p);

// Bounded-Lipschitz (Kantorovich-Rubinstein) distance: sup over f with
// ||f||_inf + ||f||_lip <= 1, solved exactly as an LP on the merged support
// (piecewise-linear extension argument); exact for atomic measures, a
// documented approximation for grid measures (cells collapse to centers).
// Supports above 10^4 points fall back to a capped-potential W1-style bound
// with the mode reported.
struct BlResult {
  double value;
  bool exact_lp;  // false when the capped-potential fallback was used
};
BlResult bl_distance_full(std::span<const double> points, std::span<const double> signed_mass);
double bl_distance(const EmpiricalMeasure& a, const EmpiricalMeasure& b);
double bl_distance(const EmpiricalMeasure& a, const GridMeasure& b);
double bl_distance(const GridMeasure& a, const EmpiricalMeasure& b);
double bl_distance(const GridMeasure& a, const GridMeasure& b);

}  // namespace rmt

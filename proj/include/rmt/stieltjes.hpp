#pragma once

#include <complex>
#include <functional>
#include <span>

#include "rmt/measures.hpp"

namespace rmt {

using Complex = std::complex<double>;

// Evaluable Stieltjes transform S(z) = int 1/(z-t) dmu(t), Im z != 0, together
// with where it came from. deriv may be empty; consumers fall back to a
// central complex difference.
struct StieltjesField {
  enum class Provenance { closed_form, measure_backed, characteristic_solved };
  std::function<Complex(Complex)> eval;
  std::function<Complex(Complex)> deriv;
  Provenance provenance = Provenance::measure_backed;

  Complex operator()(Complex z) const { return eval(z); }
  Complex derivative(Complex z) const;
};

Complex stieltjes(const EmpiricalMeasure& mu, Complex z);
Complex stieltjes(const GridMeasure& mu, Complex z);

// S_sigma(z) = (z - sqrt(z^2-4))/2 on the upper half plane (branch with
// sqrt(-1)=i on C \ R+), extended below by conjugate symmetry.
Complex semicircle_stieltjes(Complex z);
// S_{sigma_beta}(z) = (z - sqrt(z^2-2*beta))/beta, same branch convention.
Complex semicircle_beta_stieltjes(double beta, Complex z);

StieltjesField stieltjes_field(const EmpiricalMeasure& mu);
StieltjesField stieltjes_field(const GridMeasure& mu);
StieltjesField stieltjes_field_delta0();
StieltjesField stieltjes_field_semicircle();
StieltjesField stieltjes_field_semicircle_beta(double beta);

// mu([a,b]) recovered from -(1/pi) Im int_a^b S(x+i*eps) dx, Richardson
// extrapolated over eps_seq (default 1e-1..1e-4). Throws no_convergence_error
// (carrying the per-eps estimates) when the extrapolation has not settled.
double stieltjes_invert(const StieltjesField& s, double a, double b,
                        std::span<const double> eps_seq = {}, double tol = 5e-3);

// Hilbert transform H(mu)(x) = lim Re S(x + i*eps), two-point Richardson with
// eps in {1e-3, 5e-4}.
double hilbert_transform(const StieltjesField& s, double x);
// Grid-measure variant; x inside a zero-width feature or at an atom-like
// spike is rejected.
double hilbert_transform(const GridMeasure& mu, double x);

// int log|x-y| d sigma_beta(y): closed form (x^2/beta - log 2 - 1)/2 +
// (1/2) log beta inside the support, edge value plus quadrature of the real
// Stieltjes branch outside.
double log_potential_semicircle(double x, double beta);

}  // namespace rmt

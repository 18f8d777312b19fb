#include "rmt/burgers.hpp"

#include <cmath>

#include "rmt/numerics.hpp"

namespace rmt {

namespace {

Complex characteristic_equation(const CharacteristicQuery& q, Complex r) {
  if (q.flow == CharacteristicQuery::Flow::dyson) return r + q.t * q.s0(r) - q.z;
  double th = q.theta;
  return r * std::exp(-th * q.t) + q.s0(r) * std::sinh(th * q.t) / th - q.z;
}

Complex characteristic_derivative(const CharacteristicQuery& q, Complex r) {
  if (q.flow == CharacteristicQuery::Flow::dyson) return 1.0 + q.t * q.s0.derivative(r);
  double th = q.theta;
  return std::exp(-th * q.t) + q.s0.derivative(r) * std::sinh(th * q.t) / th;
}

}  // namespace

CharacteristicSolution solve_characteristic(const CharacteristicQuery& q) {
  if (!(q.z.imag() > 0.0)) throw invalid_argument("solve_characteristic: need Im z > 0");
  if (!(q.t > 0.0)) throw invalid_argument("solve_characteristic: need t > 0");
  if (q.flow == CharacteristicQuery::Flow::ou && !(q.theta > 0.0))
    throw invalid_argument("solve_characteristic: OU flow needs theta > 0");

  const double tol = 1e-13 * (1.0 + std::abs(q.z));
  Complex r = q.flow == CharacteristicQuery::Flow::dyson ? q.z
                                                         : q.z * std::exp(q.theta * q.t);
  if (!(r.imag() > 0.0)) r = Complex(r.real(), std::abs(q.z.imag()));
  Complex res = characteristic_equation(q, r);
  int iters = 0;
  for (; iters < 100 && std::abs(res) > tol; ++iters) {
    Complex dr = -res / characteristic_derivative(q, r);
    double damp = 1.0;
    Complex cand = r + dr;
    // halve the step while it would leave the upper half-plane or grow the
    // residual
    Complex cres = cand.imag() > 0.0 ? characteristic_equation(q, cand)
                                     : Complex(2.0 * std::abs(res), 0.0);
    int halvings = 0;
    while ((cand.imag() <= 0.0 || std::abs(cres) >= std::abs(res)) && halvings < 60) {
      damp *= 0.5;
      cand = r + damp * dr;
      cres = cand.imag() > 0.0 ? characteristic_equation(q, cand)
                               : Complex(2.0 * std::abs(res), 0.0);
      ++halvings;
    }
    r = cand;
    res = cres;
  }
  if (std::abs(res) > 10.0 * tol)
    throw no_convergence_error("solve_characteristic: Newton stalled",
                               {r.real(), r.imag(), std::abs(res)});
  Complex s = q.s0(r);
  if (q.flow == CharacteristicQuery::Flow::ou) s *= std::exp(q.theta * q.t);
  return {r, s, iters, std::abs(res)};
}

std::pair<Complex, Complex> dyson_scaling_check(Complex z, double t) {
  CharacteristicQuery q{};
  q.flow = CharacteristicQuery::Flow::dyson;
  q.s0 = stieltjes_field_delta0();
  q.t = t;
  q.z = z;
  Complex lhs = solve_characteristic(q).s_value;
  double rt = std::sqrt(t);
  Complex rhs = semicircle_stieltjes(z / rt) / rt;
  return {lhs, rhs};
}

Complex ou_longtime(double theta, Complex z) {
  if (!(theta > 0.0)) throw invalid_argument("ou_longtime: theta must be > 0");
  if (z.imag() < 0.0) return std::conj(ou_longtime(theta, std::conj(z)));
  if (z.imag() == 0.0) throw invalid_argument("ou_longtime: Im z must be nonzero");
  return theta * (z - sqrt_cut_positive_real(z * z - 2.0 / theta));
}

double burgers_residual(CharacteristicQuery::Flow flow, const StieltjesField& s0, double t,
                        Complex z, double h, double theta) {
  if (!(h > 0.0)) throw invalid_argument("burgers_residual: h must be > 0");
  if (!(z.imag() > 2.0 * h))
    throw numerical_error("burgers_residual: stencil leaves the upper half plane");
  auto S = [&](double tt, Complex zz) {
    CharacteristicQuery q{};
    q.flow = flow;
    q.s0 = s0;
    q.t = tt;
    q.z = zz;
    q.theta = theta;
    return solve_characteristic(q).s_value;
  };
  Complex s = S(t, z);
  Complex dt = (S(t + h, z) - S(t - h, z)) / (2.0 * h);
  Complex dz = (S(t, z + h) - S(t, z - h)) / (2.0 * h);
  if (flow == CharacteristicQuery::Flow::dyson) return std::abs(dt + s * dz);
  return std::abs(dt + (s - theta * z) * dz - theta * s);
}

double stationary_residual(const GridMeasure& mu, double theta) {
  mu.validate();
  StieltjesField s = stieltjes_field(mu);
  // interior support cells: positive mass, one cell of margin from the ends
  // of the occupied range
  int first = -1, last = -1;
  for (int i = 0; i < mu.cells(); ++i)
    if (mu.masses[i] > 1e-12) {
      if (first < 0) first = i;
      last = i;
    }
  if (first < 0) throw invalid_argument("stationary_residual: empty measure");
  double sup = 0.0;
  for (int i = first + 1; i < last; ++i) {
    double x = mu.cell_center(i);
    sup = std::max(sup, std::abs(hilbert_transform(s, x) - theta * x));
  }
  return sup;
}

}  // namespace rmt

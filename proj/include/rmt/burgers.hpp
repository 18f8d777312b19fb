#pragma once

#include "rmt/stieltjes.hpp"

namespace rmt {

// Characteristic query for the complex Burgers flow of the Stieltjes
// transform: Dyson  z = r + t S0(r),  OU  z = r e^{-theta t} + S0(r)
// sinh(theta t)/theta, with S(t,z) = S0(r) resp. e^{theta t} S0(r).
struct CharacteristicQuery {
  enum class Flow { dyson, ou };
  StieltjesField s0;
  double t = 0.0;
  Complex z;
  Flow flow = Flow::dyson;
  double theta = 0.0;
};

struct CharacteristicSolution {
  Complex r;        // foot of the characteristic, Im r > 0
  Complex s_value;  // S(t, z)
  int newton_iters;
  double residual;
};

// Damped Newton on the defining equation; iterates are projected to the open
// upper half plane. Existence/uniqueness of the foot holds for every query,
// so a miss is a numerical failure.
CharacteristicSolution solve_characteristic(const CharacteristicQuery& q);

// Both sides of S_t(z) = t^{-1/2} S_1(z t^{-1/2}) for delta_0 initial data.
std::pair<Complex, Complex> dyson_scaling_check(Complex z, double t);

// Long-time OU limit theta (z - sqrt(z^2 - 2/theta)), upper-half-plane branch.
Complex ou_longtime(double theta, Complex z);

// |dS/dt + S dS/dz| (Dyson) or |dS/dt + (S - theta z) dS/dz - theta S| (OU)
// by central differences of the characteristic-solved field.
double burgers_residual(CharacteristicQuery::Flow flow, const StieltjesField& s0, double t,
                        Complex z, double h, double theta = 0.0);

// sup over interior support cells of |H(mu)(x) - theta x|.
double stationary_residual(const GridMeasure& mu, double theta);

}  // namespace rmt

#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "rmt/burgers.hpp"
#include "rmt/numerics.hpp"
#include "rmt/rng.hpp"
#include "rmt/stieltjes.hpp"

using namespace rmt;

namespace {

CharacteristicQuery make_query(CharacteristicQuery::Flow flow, StieltjesField s0, double t,
                               Complex z, double theta = 0.0) {
  CharacteristicQuery q{};
  q.flow = flow;
  q.s0 = std::move(s0);
  q.t = t;
  q.z = z;
  q.theta = theta;
  return q;
}

}  // namespace

TEST_CASE("characteristic foot for the delta start") {
  Complex z(0.0, 3.0);
  auto sol = solve_characteristic(
      make_query(CharacteristicQuery::Flow::dyson, stieltjes_field_delta0(), 1.0, z));
  // closed form: r = (z + sqrt(z^2-4))/2 in the upper half plane
  Complex r_expect = (z + sqrt_cut_positive_real(z * z - 4.0)) / 2.0;
  CHECK(std::abs(sol.r - r_expect) < 1e-12);
  CHECK(std::abs(sol.s_value - semicircle_stieltjes(z)) < 1e-12);
  CHECK(sol.residual <= 1e-12 * (1.0 + std::abs(z)));
  CHECK(sol.r.imag() > 0.0);
}

TEST_CASE("characteristic limits") {
  Complex z(0.7, 1.3);
  // OU with vanishing theta matches the Dyson solve
  auto dy = solve_characteristic(
      make_query(CharacteristicQuery::Flow::dyson, stieltjes_field_delta0(), 0.8, z));
  auto ou = solve_characteristic(
      make_query(CharacteristicQuery::Flow::ou, stieltjes_field_delta0(), 0.8, z, 1e-8));
  CHECK(std::abs(dy.s_value - ou.s_value) < 1e-6);

  // t -> 0 identity
  auto tiny = solve_characteristic(
      make_query(CharacteristicQuery::Flow::dyson, stieltjes_field_semicircle(), 1e-10, z));
  CHECK(std::abs(tiny.s_value - semicircle_stieltjes(z)) < 1e-8);

  CHECK_THROWS_AS(solve_characteristic(make_query(CharacteristicQuery::Flow::dyson,
                                                  stieltjes_field_delta0(), 1.0,
                                                  Complex(0.0, -1.0))),
                  invalid_argument);
  CHECK_THROWS_AS(solve_characteristic(make_query(CharacteristicQuery::Flow::dyson,
                                                  stieltjes_field_delta0(), 0.0,
                                                  Complex(0.0, 1.0))),
                  invalid_argument);
}

TEST_CASE("dyson scaling identity") {
  auto [l1, r1] = dyson_scaling_check(Complex(0.0, 4.0), 4.0);
  Complex expect = 0.5 * semicircle_stieltjes(Complex(0.0, 2.0));
  CHECK(std::abs(l1 - expect) < 1e-12);
  CHECK(std::abs(r1 - expect) < 1e-12);

  auto [l2, r2] = dyson_scaling_check(Complex(1.0, 1.0), 1.0);
  CHECK(std::abs(l2 - semicircle_stieltjes(Complex(1.0, 1.0))) < 1e-12);
  CHECK(std::abs(l2 - r2) < 1e-12);

  RngStream rng(71, 0);
  double worst = 0.0;
  for (int i = 0; i < 40; ++i) {
    double t = 0.2 + 3.0 * rng.uniform();
    Complex z(4.0 * rng.uniform() - 2.0, 0.3 + 2.0 * rng.uniform());
    auto [lhs, rhs] = dyson_scaling_check(z, t);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("semicircle functional equation along the flow at t=1") {
  RngStream rng(72, 0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    Complex z(5.0 * rng.uniform() - 2.5, 0.2 + 2.0 * rng.uniform());
    auto sol = solve_characteristic(
        make_query(CharacteristicQuery::Flow::dyson, stieltjes_field_delta0(), 1.0, z));
    Complex s = sol.s_value;
    worst = std::max(worst, std::abs(s * s - z * s + 1.0));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("ou long-time limit") {
  // theta = 1/2 has support [-2,2]; matches quadrature over the density
  auto law = ReferenceLaw::ou_limit(0.5);
  for (Complex z : {Complex(0.3, 0.9), Complex(-1.2, 0.4)}) {
    double re = integrate([&](double x) { return ((1.0 / (z - x)) * law.density(x)).real(); },
                          -2.0, 2.0, 1e-11);
    double im = integrate([&](double x) { return ((1.0 / (z - x)) * law.density(x)).imag(); },
                          -2.0, 2.0, 1e-11);
    CHECK(std::abs(ou_longtime(0.5, z) - Complex(re, im)) < 1e-8);
  }

  Complex far(0.0, 50.0);
  CHECK(std::abs(ou_longtime(1.0, far) - 1.0 / far) < 0.02 * std::abs(1.0 / far));

  // long OU characteristic run lands on the limit field
  Complex z(0.0, 1.0);
  auto sol = solve_characteristic(
      make_query(CharacteristicQuery::Flow::ou, stieltjes_field_delta0(), 12.0, z, 1.0));
  CHECK(std::abs(sol.s_value - ou_longtime(1.0, z)) < 1e-4);
}

TEST_CASE("burgers residual vanishes on solved fields") {
  CHECK(burgers_residual(CharacteristicQuery::Flow::dyson, stieltjes_field_delta0(), 0.5,
                         Complex(0.0, 2.0), 1e-4) < 1e-6);
  CHECK(burgers_residual(CharacteristicQuery::Flow::ou, stieltjes_field_delta0(), 0.5,
                         Complex(0.0, 2.0), 1e-4, 1.0) < 1e-6);

  // negative control: a frozen-in-time field does not satisfy the equation
  Complex z(0.0, 1.0);
  const double h = 1e-4;
  Complex s = semicircle_stieltjes(z);
  Complex dz = (semicircle_stieltjes(z + h) - semicircle_stieltjes(z - h)) / (2.0 * h);
  double frozen_residual = std::abs(Complex(0.0, 0.0) + s * dz);  // dS/dt = 0
  CHECK(frozen_residual > 1e-2);

  CHECK_THROWS_AS(burgers_residual(CharacteristicQuery::Flow::dyson, stieltjes_field_delta0(),
                                   0.5, Complex(0.0, 1e-5), 1e-4),
                  numerical_error);
}

TEST_CASE("characteristics from empirical initial data") {
  RngStream rng(73, 0);
  EmpiricalMeasure mu;
  for (int i = 0; i < 7; ++i) mu.atoms.push_back(3.0 * rng.uniform() - 1.5);
  std::sort(mu.atoms.begin(), mu.atoms.end());
  auto s0 = stieltjes_field(mu);
  for (int i = 0; i < 50; ++i) {
    double t = 0.1 + 2.0 * rng.uniform();
    Complex z(3.0 * rng.uniform() - 1.5, 0.15 + 1.5 * rng.uniform());
    auto sol = solve_characteristic(make_query(CharacteristicQuery::Flow::dyson, s0, t, z));
    CHECK(sol.residual <= 1e-12 * (1.0 + std::abs(z)));
    CHECK(sol.r.imag() > 0.0);
    // the defining equation holds at the returned foot
    CHECK(std::abs(sol.r + t * s0(sol.r) - z) <= 1e-12 * (1.0 + std::abs(z)));
  }
}

TEST_CASE("stationary residual of the hilbert condition") {
  auto sigma_theta = ReferenceLaw::ou_limit(0.5).discretize(256);
  CHECK(stationary_residual(sigma_theta, 0.5) < 5e-3);

  GridMeasure uni;
  uni.nodes.resize(129);
  for (int i = 0; i <= 128; ++i) uni.nodes[i] = -1.0 + 2.0 * i / 128.0;
  uni.masses.assign(128, 1.0 / 128.0);
  CHECK(stationary_residual(uni, 0.5) > 0.05);
}

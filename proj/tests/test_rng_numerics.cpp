#include <doctest.h>

#include <cmath>
#include <complex>

#include "rmt/numerics.hpp"
#include "rmt/rng.hpp"

using namespace rmt;

TEST_CASE("rng streams are reproducible and decorrelated") {
  RngStream a(42, 7), b(42, 7), c(42, 8);
  for (int i = 0; i < 100; ++i) {
    auto va = a.next_u64();
    CHECK(va == b.next_u64());
  }
  RngStream a2(42, 7);
  int differing = 0;
  for (int i = 0; i < 64; ++i)
    if (a2.next_u64() != c.next_u64()) ++differing;
  CHECK(differing > 60);
}

TEST_CASE("rng normal moments") {
  RngStream rng(1, 0);
  const int n = 200000;
  double s1 = 0.0, s2 = 0.0, s4 = 0.0;
  for (int i = 0; i < n; ++i) {
    double x = rng.normal();
    s1 += x;
    s2 += x * x;
    s4 += x * x * x * x;
  }
  CHECK(std::abs(s1 / n) < 0.01);
  CHECK(s2 / n == doctest::Approx(1.0).epsilon(0.02));
  CHECK(s4 / n == doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("rng gamma mean and variance") {
  RngStream rng(2, 0);
  for (double shape : {1.0, 3.0, 17.5}) {
    const int n = 100000;
    double s1 = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
      double x = rng.gamma(shape);
      s1 += x;
      s2 += x * x;
    }
    double mean = s1 / n;
    double var = s2 / n - mean * mean;
    CHECK(mean == doctest::Approx(shape).epsilon(0.02));
    CHECK(var == doctest::Approx(shape).epsilon(0.05));
  }
}

TEST_CASE("adaptive quadrature") {
  CHECK(integrate([](double x) { return x * x; }, 0.0, 1.0) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(integrate([](double x) { return std::exp(-x * x); }, -8.0, 8.0) ==
        doctest::Approx(std::sqrt(M_PI)).epsilon(1e-12));
  CHECK(integrate([](double x) { return std::sqrt(std::max(1.0 - x * x, 0.0)); }, -1.0, 1.0,
                  1e-12) == doctest::Approx(M_PI / 2).epsilon(1e-9));
}

TEST_CASE("regularized incomplete gamma") {
  CHECK(gamma_q(1.0, 2.5) == doctest::Approx(std::exp(-2.5)).epsilon(1e-13));
  CHECK(log_gamma_q(1.0, 700.0) == doctest::Approx(-700.0).epsilon(1e-12));
  for (double a : {0.5, 3.0, 20.0, 147.0})
    for (double x : {0.1, 2.0, 19.0, 160.0})
      CHECK(gamma_p(a, x) + gamma_q(a, x) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(poisson_cdf(2, 3.0) == doctest::Approx(std::exp(-3.0) * 8.5).epsilon(1e-12));
}

TEST_CASE("sqrt branch with cut on the positive reals") {
  auto s = sqrt_cut_positive_real(std::complex<double>(-1.0, 0.0));
  CHECK(s.real() == doctest::Approx(0.0));
  CHECK(s.imag() == doctest::Approx(1.0));
  for (double re : {-3.0, -0.5, 0.5, 3.0})
    for (double im : {-2.0, -1e-9, 1e-9, 2.0}) {
      auto r = sqrt_cut_positive_real({re, im});
      CHECK(r.imag() >= 0.0);
      auto sq = r * r;
      CHECK(sq.real() == doctest::Approx(re).epsilon(1e-12));
      CHECK(sq.imag() == doctest::Approx(im).epsilon(1e-12));
    }
}

TEST_CASE("golden maximization") {
  double v = golden_maximize([](double x) { return -(x - 0.3) * (x - 0.3); }, 0.0, 1.0);
  CHECK(v == doctest::Approx(0.0).epsilon(1e-15));
}

#include <doctest.h>

#include <cmath>
#include <vector>

#include "rmt/dyson.hpp"
#include "rmt/kernels.hpp"
#include "rmt/measures.hpp"
#include "rmt/numerics.hpp"
#include "rmt/rng.hpp"

using namespace rmt;

namespace {

struct ZeroNoise {
  double normal() { return 0.0; }
};

SdeConfig dyson_cfg(int n, double beta, double t_end = 1.0, double dt = 1e-3) {
  SdeConfig c;
  c.family = SdeConfig::Family::dyson;
  c.n = n;
  c.beta = beta;
  c.t_end = t_end;
  c.dt_max = dt;
  return c;
}

}  // namespace

TEST_CASE("drift closed forms") {
  ParticleState st{0.0, {-1.0, 1.0}};
  auto b = drift(st, dyson_cfg(2, 2.0));
  CHECK(b[0] == doctest::Approx(-0.25));
  CHECK(b[1] == doctest::Approx(0.25));

  SdeConfig ou;
  ou.family = SdeConfig::Family::ou;
  ou.n = 1;
  ou.theta = 1.0;
  CHECK(drift({0.0, {3.0}}, ou)[0] == doctest::Approx(-3.0));

  SdeConfig wis;
  wis.family = SdeConfig::Family::wishart;
  wis.n = 1;
  wis.m = 5;
  CHECK(drift({0.0, {2.0}}, wis)[0] == doctest::Approx(5.0));

  CHECK_THROWS_AS(drift({0.0, {1.0, 1.0}}, dyson_cfg(2, 2.0)), singular_configuration_error);
}

TEST_CASE("drift fast path agrees with the reference loop") {
  RngStream rng(51, 0);
  for (int trial = 0; trial < 30; ++trial) {
    int n = 2 + static_cast<int>(rng.next_u64() % 12);
    ParticleState st{0.0, {}};
    double x = rng.uniform();
    for (int i = 0; i < n; ++i) {
      st.positions.push_back(x);
      x += 0.05 + rng.uniform();
    }
    std::vector<SdeConfig> cfgs;
    cfgs.push_back(dyson_cfg(n, 2.0));
    SdeConfig gen;
    gen.family = SdeConfig::Family::generalized;
    gen.n = n;
    gen.alpha_n = 1.7;
    gen.beta_n = 5.0 * n * n;
    cfgs.push_back(gen);
    SdeConfig ou;
    ou.family = SdeConfig::Family::ou;
    ou.n = n;
    ou.theta = 0.7;
    cfgs.push_back(ou);
    SdeConfig wis;
    wis.family = SdeConfig::Family::wishart;
    wis.n = n;
    wis.m = n + 3;
    cfgs.push_back(wis);
    for (const auto& c : cfgs) {
      auto f = drift(st, c);
      auto r = drift_reference(st, c);
      for (int i = 0; i < n; ++i)
        CHECK(f[i] == doctest::Approx(r[i]).epsilon(1e-12));
    }
    // pairwise antisymmetry: dyson interaction sums cancel
    auto d = drift(st, dyson_cfg(n, 2.0));
    double s = 0.0;
    for (double v : d) s += v;
    CHECK(std::abs(s) < 1e-12 * n);
  }
}

TEST_CASE("deterministic euler step") {
  ZeroNoise z;
  auto cfg = dyson_cfg(2, 2.0, 1.0, 0.01);
  auto st = step(ParticleState{0.0, {-1.0, 1.0}}, 0.01, cfg, z);
  CHECK(st.positions[0] == doctest::Approx(-1.0025));
  CHECK(st.positions[1] == doctest::Approx(1.0025));
  CHECK(st.t == doctest::Approx(0.01));

  // OU relaxation to e^-1 under vanishing step
  SdeConfig ou;
  ou.family = SdeConfig::Family::ou;
  ou.n = 1;
  ou.theta = 1.0;
  ou.dt_max = 1e-4;
  ou.t_end = 1.0;
  ParticleState s{0.0, {1.0}};
  for (int k = 0; k < 10000; ++k) s = step(s, 1e-4, ou, z);
  CHECK(s.positions[0] == doctest::Approx(std::exp(-1.0)).epsilon(1e-3));

  CHECK_THROWS_AS(step(ParticleState{0.0, {-1.0, 1.0}}, 0.1, cfg, z), invalid_argument);
}

TEST_CASE("ordering preserved over many steps") {
  auto cfg = dyson_cfg(32, 2.0, 10.0, 1e-3);
  cfg.record_times = {10.0};
  RngStream rng(52, 0);
  auto rec = simulate(cfg, rng);
  CHECK(rec.min_gap > 0.0);
  for (int i = 0; i + 1 < 32; ++i)
    CHECK(rec.states.back().positions[i] < rec.states.back().positions[i + 1]);
}

TEST_CASE("bridge splitting keeps the Brownian increment law") {
  // dt large enough to force rejections; accumulated increments must still
  // have variance ~ elapsed time
  auto cfg = dyson_cfg(8, 1.0, 1.0, 0.02);
  cfg.record_times = {1.0};
  double s2 = 0.0;
  long total_rejections = 0;
  const int trials = 200;
  int count = 0;
  for (int t = 0; t < trials; ++t) {
    RngStream rng(53, t);
    auto rec = simulate(cfg, rng);
    total_rejections += rec.step_rejections;
    for (double v : rec.noise_totals) {
      s2 += v * v / rec.total_time;
      ++count;
    }
  }
  CHECK(total_rejections > 0);
  double var = s2 / count;
  CHECK(var == doctest::Approx(1.0).epsilon(0.08));
}

TEST_CASE("collision abort below the critical noise") {
  // beta_N far below 2 N^2: Brownian agitation beats the repulsion
  SdeConfig cfg;
  cfg.family = SdeConfig::Family::generalized;
  cfg.n = 8;
  cfg.alpha_n = 8.0;
  cfg.beta_n = 4.0;  // 2 N^2 = 128
  cfg.t_end = 5.0;
  cfg.dt_max = 0.05;
  cfg.record_times = {5.0};
  ParticleState init{0.0, {}};
  for (int i = 0; i < 8; ++i) init.positions.push_back(0.1 * i);
  RngStream rng(54, 0);
  CHECK_THROWS_AS(simulate(cfg, rng, init), collision_abort_error);
}

TEST_CASE("zero-start dyson reaches the semicircle at t=1") {
  auto cfg = dyson_cfg(256, 2.0, 1.0, 1e-3);
  cfg.record_times = {1.0};
  RngStream rng(55, 0);
  auto rec = simulate(cfg, rng);
  EmpiricalMeasure esd;
  esd.atoms = rec.states.back().positions;
  auto sigma = ReferenceLaw::semicircle().discretize(512);
  CHECK(bl_distance(esd, sigma) < 0.07);
  CHECK(rec.min_gap > 0.0);
}

TEST_CASE("ou long-time state matches sigma_theta") {
  SdeConfig cfg;
  cfg.family = SdeConfig::Family::ou;
  cfg.n = 256;
  cfg.theta = 0.5;
  cfg.t_end = 10.0;
  cfg.dt_max = 2e-3;
  cfg.record_times = {10.0};
  RngStream rng(56, 0);
  auto rec = simulate(cfg, rng);
  EmpiricalMeasure esd;
  esd.atoms = rec.states.back().positions;
  auto target = ReferenceLaw::ou_limit(0.5).discretize(512);  // semicircle on [-2,2]
  CHECK(bl_distance(esd, target) < 0.07);
}

TEST_CASE("containment energy and generator") {
  SdeConfig gen;
  gen.family = SdeConfig::Family::generalized;
  gen.n = 2;
  gen.alpha_n = 2.0;
  gen.beta_n = 16.0;
  auto rep = energy({0.0, {0.0, 1.0}}, gen);
  CHECK(rep.le == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(rep.e == doctest::Approx(rep.e_v + rep.e_w));

  // beta_N = 2 N^2: the x-dependent bracket vanishes exactly
  SdeConfig crit;
  crit.family = SdeConfig::Family::generalized;
  crit.n = 4;
  crit.alpha_n = 3.0;
  crit.beta_n = 2.0 * 16.0;
  double le0 = energy({0.0, {0.0, 0.3, 1.1, 2.0}}, crit).le;
  double le1 = energy({0.0, {-3.0, -2.9999999, 5.0, 9.0}}, crit).le;
  CHECK(le0 == le1);
  CHECK(le0 == doctest::Approx(4.0 * crit.alpha_n / crit.beta_n +
                               crit.alpha_n * 3.0 / 16.0));

  // lower bound on random ordered states
  RngStream rng(57, 0);
  for (int trial = 0; trial < 1000; ++trial) {
    int n = 2 + static_cast<int>(rng.next_u64() % 8);
    ParticleState st{0.0, {}};
    double x = -2.0 + rng.uniform();
    for (int i = 0; i < n; ++i) {
      st.positions.push_back(x);
      x += 0.01 + 2.0 * rng.uniform();
    }
    SdeConfig c;
    c.family = SdeConfig::Family::generalized;
    c.n = n;
    c.alpha_n = 1.0 + rng.uniform();
    c.beta_n = 2.0 * n * n * (0.5 + rng.uniform());
    auto r = energy(st, c);
    CHECK(r.e >= r.lower_bound - 1e-12);
  }

  // closed form vs finite-difference generator application
  for (int trial = 0; trial < 25; ++trial) {
    RngStream r2(58, trial);
    int n = 2 + static_cast<int>(r2.next_u64() % 5);
    ParticleState st{0.0, {}};
    double x = -1.5;
    for (int i = 0; i < n; ++i) {
      x += 0.3 + r2.uniform();
      st.positions.push_back(x);
    }
    SdeConfig c;
    c.family = SdeConfig::Family::generalized;
    c.n = n;
    c.alpha_n = 0.5 + 2.0 * r2.uniform();
    c.beta_n = 2.0 * n * n * (0.8 + r2.uniform());
    const double h = 1e-4;
    auto e_at = [&](std::vector<double> pos) {
      return energy({0.0, std::move(pos)}, c).e;
    };
    double e0 = e_at(st.positions);
    double lap = 0.0;
    std::vector<double> grad(n);
    for (int i = 0; i < n; ++i) {
      auto p = st.positions;
      p[i] += h;
      double ep = e_at(p);
      p[i] -= 2 * h;
      double em = e_at(p);
      lap += (ep - 2 * e0 + em) / (h * h);
      grad[i] = (ep - em) / (2 * h);
    }
    auto b = drift(st, c);
    double le_fd = 2.0 * c.alpha_n / c.beta_n * lap;
    for (int i = 0; i < n; ++i) le_fd += b[i] * grad[i];
    double le = energy(st, c).le;
    CHECK(std::abs(le - le_fd) / std::max(1.0, std::abs(le)) < 1e-5);
  }

  CHECK_THROWS_AS(energy({0.0, {1.0}}, gen), invalid_argument);
  CHECK_THROWS_AS(energy({0.0, {1.0, 1.0}}, gen), singular_configuration_error);
}

TEST_CASE("energy grows at most linearly in expectation") {
  auto cfg = dyson_cfg(16, 1.0, 2.0, 2e-3);  // beta_N = 2 N^2 exactly
  for (int i = 1; i <= 20; ++i) cfg.record_times.push_back(0.1 * i);
  double sup_le = 4.0 * cfg.alpha() / cfg.betaN() + cfg.alpha() * 15.0 / 256.0;
  const int trials = 50;
  std::vector<double> mean_e(20, 0.0);
  double mean_e0 = 0.0;
  for (int t = 0; t < trials; ++t) {
    RngStream rng(59, t);
    auto rec = simulate(cfg, rng);
    mean_e0 += energy(rec.states.front(), cfg).e / trials;  // at first record
    for (int k = 0; k < 20; ++k) mean_e[k] += rec.energy_series[k] / trials;
  }
  for (int k = 0; k < 20; ++k) {
    double t = 0.1 * (k + 1);
    CHECK(mean_e[k] <= mean_e0 + sup_le * t * 1.5 + 0.05);
  }
}

TEST_CASE("johansson density") {
  // zero start at t=1 is the GUE eigenvalue density
  RngStream rng(60, 0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> l(3);
    for (double& v : l) v = 6.0 * rng.uniform() - 3.0;
    std::sort(l.begin(), l.end());
    double a = johansson_density(1.0, {}, l);
    double b = gue_eigen_density(l);
    CHECK(std::abs(a - b) <= 1e-10 * std::abs(b));
  }

  // single particle from lambda0 = 0: Gaussian of variance t
  for (double t : {0.3, 1.0, 2.5})
    for (double x : {-1.0, 0.2, 2.0}) {
      std::vector<double> l0{0.0}, l{x};
      double expect = std::exp(-x * x / (2 * t)) / std::sqrt(2 * M_PI * t);
      CHECK(johansson_density(t, l0, l) == doctest::Approx(expect).epsilon(1e-12));
      CHECK(johansson_density(t, {}, l) == doctest::Approx(expect).epsilon(1e-12));
    }

  // normalization at N=2, t=0.5 (integral over the exchangeable plane is 1)
  std::vector<double> l0{-0.5, 0.7};
  double mass = integrate(
      [&](double x1) {
        return integrate(
            [&](double x2) {
              std::vector<double> l{x1, x2};
              return johansson_density(0.5, l0, l);
            },
            -7.0, 7.0, 1e-8);
      },
      -7.0, 7.0, 1e-8);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-4));

  std::vector<double> big(11, 0.0), l1{0.0};
  CHECK_THROWS_AS(johansson_density(1.0, {}, big), invalid_argument);
  std::vector<double> unsorted{1.0, 0.0};
  std::vector<double> lam{0.1, 0.2};
  CHECK_THROWS_AS(johansson_density(1.0, unsorted, lam), invalid_argument);
  CHECK_THROWS_AS(johansson_density(0.0, {}, l1), invalid_argument);
}

TEST_CASE("vandermonde determinant and harmonicity") {
  std::vector<double> l{1.0, 2.0, 4.0};
  auto rep = vandermonde_and_harmonicity(l);
  CHECK(rep.det == doctest::Approx(6.0));
  CHECK(std::abs(rep.laplacian_fd) <= 1e-4 * std::abs(rep.det));

  std::vector<double> two{0.0, 1.0};
  CHECK(vandermonde_and_harmonicity(two).det == doctest::Approx(1.0));

  // gradient formula dD/dl_i = sum_j D/(l_i - l_j)
  std::vector<double> pts{-1.3, 0.2, 0.9, 2.4};
  double d0 = vandermonde(pts);
  const double h = 1e-6;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    auto p = pts;
    p[i] += h;
    double dp = vandermonde(p);
    p[i] -= 2 * h;
    double dm = vandermonde(p);
    double fd = (dp - dm) / (2 * h);
    double formula = 0.0;
    for (std::size_t j = 0; j < pts.size(); ++j)
      if (j != i) formula += d0 / (pts[i] - pts[j]);
    CHECK(std::abs(fd - formula) / std::abs(formula) < 1e-6);
  }
}

TEST_CASE("martingale residual of the empirical measure") {
  auto cfg = dyson_cfg(8, 1.0, 1.0, 5e-3);
  for (int i = 1; i <= 200; ++i) cfg.record_times.push_back(i / 200.0);

  TestFunction constant{[](double) { return 1.0; }, [](double) { return 0.0; },
                        [](double) { return 0.0; }, 0.0};
  RngStream rng(61, 0);
  auto rec = simulate(cfg, rng);
  auto mr = martingale_residual(rec, constant);
  for (double v : mr.path) CHECK(std::abs(v) < 1e-12);

  // f(x) = x: M is the rescaled Brownian average, Var(M(1)) = 2/N^2
  TestFunction linear{[](double x) { return x; }, [](double) { return 1.0; },
                      [](double) { return 0.0; }, 1.0};
  double s2 = 0.0;
  const int trials = 200;
  for (int t = 0; t < trials; ++t) {
    RngStream r(62, t);
    auto tr = simulate(cfg, r);
    auto m = martingale_residual(tr, linear);
    s2 += m.path.back() * m.path.back();
  }
  double var = s2 / trials;
  double expect = 2.0 / 64.0;
  CHECK(std::abs(var - expect) / expect < 0.3);

  // f = log(1+x^2): rare exceedance of 5 sqrt(bracket bound)
  TestFunction logf{[](double x) { return std::log(1 + x * x); },
                    [](double x) { return 2 * x / (1 + x * x); },
                    [](double x) {
                      double d = 1 + x * x;
                      return 2 * (1 - x * x) / (d * d);
                    },
                    1.0};
  int exceed = 0;
  const int trials2 = 500;
  for (int t = 0; t < trials2; ++t) {
    RngStream r(63, t);
    auto tr = simulate(cfg, r);
    auto m = martingale_residual(tr, logf);
    if (std::abs(m.path.back()) > 5.0 * std::sqrt(m.bracket_bound)) ++exceed;
  }
  CHECK(exceed < 0.02 * trials2);

  auto coarse = dyson_cfg(8, 1.0, 1.0, 5e-3);
  coarse.record_times = {0.5, 1.0};
  RngStream r3(64, 0);
  auto rec3 = simulate(coarse, r3);
  CHECK_THROWS_AS(martingale_residual(rec3, linear), insufficient_resolution_error);

  auto beta2 = dyson_cfg(8, 2.0, 1.0, 5e-3);
  for (int i = 1; i <= 150; ++i) beta2.record_times.push_back(i / 150.0);
  RngStream r4(65, 0);
  auto rec4 = simulate(beta2, r4);
  CHECK_THROWS_AS(martingale_residual(rec4, linear), invalid_argument);
}

TEST_CASE("config validation") {
  SdeConfig bad = dyson_cfg(4, 1.5);
  CHECK_THROWS_AS(bad.validate(), invalid_argument);
  SdeConfig wis;
  wis.family = SdeConfig::Family::wishart;
  wis.n = 8;
  wis.m = 4;
  CHECK_THROWS_AS(wis.validate(), invalid_argument);
  // dyson(beta) -> generalized correspondence
  auto c2 = dyson_cfg(10, 2.0);
  CHECK(c2.alpha() == 10.0);
  CHECK(c2.betaN() == 400.0);
  CHECK(dyson_cfg(10, 1.0).betaN() == 200.0);
}

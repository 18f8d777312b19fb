#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "rmt/ensembles.hpp"
#include "rmt/errors.hpp"

namespace rmt {

// Interacting-particle SDE configuration. dyson(beta) is the generalized
// system at alpha_N = N, beta_N = 2 N^2 beta; the table is applied on access.
struct SdeConfig {
  enum class Family { dyson, generalized, ou, wishart };
  Family family = Family::dyson;
  int n = 0;
  double beta = 2.0;     // dyson
  double alpha_n = 0.0;  // generalized
  double beta_n = 0.0;   // generalized
  double theta = 0.0;    // ou
  int m = 0;             // wishart, requires m >= n
  double dt_max = 1e-3;
  double t_end = 1.0;
  std::vector<double> record_times;
  bool ordering_guard = true;

  double alpha() const;
  double betaN() const;
  double noise_coefficient() const;  // families with constant diffusion
  void validate() const;
};

struct ParticleState {
  double t = 0.0;
  std::vector<double> positions;  // strictly increasing; wishart: nonnegative
  int n() const { return static_cast<int>(positions.size()); }
};

struct EnergyReport {
  double e_v;
  double e_w;
  double e;
  double le;
  double lower_bound;  // |x|^2/(2N) + 1/16
};

struct TrajectoryRecord {
  SdeConfig config;
  std::vector<ParticleState> states;  // at record_times
  double min_gap = 0.0;
  long step_rejections = 0;
  std::vector<double> energy_series;        // dyson/generalized families
  std::vector<double> noise_totals;         // accumulated Brownian increments
  double total_time = 0.0;
};

// Pairwise drift for the configured family; exact pairwise sums with the
// per-pair 1/(x_i-x_j) factor capped at 1/eps_reg.
std::vector<double> drift(const ParticleState& state, const SdeConfig& cfg);
// Plain O(N^2) double loop, kept as the agreement oracle for the pair-sharing
// fast path.
std::vector<double> drift_reference(const ParticleState& state, const SdeConfig& cfg);

EnergyReport energy(const ParticleState& state, const SdeConfig& cfg);

// Transition density of the Fokker-Planck flow of d l_i = sum 1/(l_i-l_j) dt
// + dB_i as an exchangeable vector. Empty lambda0 selects the zero-start
// formula; N <= 10.
double johansson_density(double t, std::span<const double> lambda0,
                         std::span<const double> lambda);

double vandermonde(std::span<const double> lambda);
struct VandermondeReport {
  double det;
  double laplacian_fd;
};
VandermondeReport vandermonde_and_harmonicity(std::span<const double> lambda);

struct TestFunction {
  std::function<double(double)> f, df, d2f;
  double sup_df = 1.0;
};

struct MartingaleResidual {
  std::vector<double> times;
  std::vector<double> path;  // reconstructed M_f^N at the recorded times
  double bracket_bound;      // 2 t sup|f'|^2 / N^2
};

// Subtracts every drift and second-order term of the empirical-measure Ito
// formula from <mu_N(t), f>; requires a dyson beta=1 trajectory recorded on
// at least 100 times.
MartingaleResidual martingale_residual(const TrajectoryRecord& traj, const TestFunction& f);

namespace detail {

constexpr double kEpsReg = 1e-8;  // per-pair drift cap 1/eps_reg

bool state_valid(const std::vector<double>& x, const SdeConfig& cfg);
std::vector<double> diffusion(const std::vector<double>& x, const SdeConfig& cfg);

template <class Rng>
ParticleState step_with_noise(const ParticleState& s, double dt,
                              const std::vector<double>& db, const SdeConfig& cfg,
                              Rng& rng, int depth, TrajectoryRecord* diag) {
  const int n = s.n();
  std::vector<double> b = drift(s, cfg);
  std::vector<double> sig = diffusion(s.positions, cfg);
  std::vector<double> prop(n);
  for (int i = 0; i < n; ++i) prop[i] = s.positions[i] + b[i] * dt + sig[i] * db[i];
  if (state_valid(prop, cfg)) {
    if (diag)
      for (int i = 0; i < n; ++i) diag->noise_totals[i] += db[i];
    return {s.t + dt, std::move(prop)};
  }
  if (depth >= 20)
    throw collision_abort_error("step: 20 halvings exhausted (collision)", s.positions, s.t);
  if (diag) ++diag->step_rejections;
  // Brownian-bridge split: the first half-increment conditioned on db is
  // N(db/2, dt/4), the second half is the remainder, so the driving path law
  // is unchanged by the retry.
  std::vector<double> h1(n), h2(n);
  double half_sd = 0.5 * std::sqrt(dt);
  for (int i = 0; i < n; ++i) {
    h1[i] = 0.5 * db[i] + half_sd * rng.normal();
    h2[i] = db[i] - h1[i];
  }
  ParticleState mid = step_with_noise(s, 0.5 * dt, h1, cfg, rng, depth + 1, diag);
  return step_with_noise(mid, 0.5 * dt, h2, cfg, rng, depth + 1, diag);
}

}  // namespace detail

// One Euler-Maruyama step; on an ordering violation the step is halved (up to
// 20 times) with bridge-split noise.
template <class Rng>
ParticleState step(const ParticleState& state, double dt, const SdeConfig& cfg, Rng& rng,
                   TrajectoryRecord* diag = nullptr) {
  cfg.validate();
  if (!(dt > 0.0) || dt > cfg.dt_max * (1.0 + 1e-12))
    throw invalid_argument("step: need 0 < dt <= dt_max");
  if (!detail::state_valid(state.positions, cfg))
    throw singular_configuration_error("step: state violates ordering");
  std::vector<double> db(state.n());
  double sd = std::sqrt(dt);
  for (double& v : db) v = sd * rng.normal();
  return detail::step_with_noise(state, dt, db, cfg, rng, 0, diag);
}

// Zero-start draws one exact eigenvalue sample at t0 = dt_max/100 matching
// the matrix flow at that time, then steps the SDE.
template <class Rng>
ParticleState zero_start_state(const SdeConfig& cfg, Rng& rng) {
  const double t0 = cfg.dt_max / 100.0;
  const int n = cfg.n;
  double beta_equiv;
  switch (cfg.family) {
    case SdeConfig::Family::dyson: beta_equiv = cfg.beta; break;
    case SdeConfig::Family::generalized: beta_equiv = cfg.betaN() / (2.0 * n * n); break;
    case SdeConfig::Family::ou: beta_equiv = 1.0; break;
    case SdeConfig::Family::wishart:
      throw invalid_argument("simulate: zero-start undefined for wishart particles");
    default: throw invalid_argument("simulate: unknown family");
  }
  ParticleState st;
  st.t = t0;
  if (beta_equiv == 2.0) {
    Spectrum sp = eigenvalues_hermitian(sample_gue(n, rng));
    st.positions = sp.values;
    double c = std::sqrt(t0 / n);
    for (double& v : st.positions) v *= c;
  } else if (beta_equiv == 1.0) {
    Spectrum sp = eigenvalues_hermitian(sample_goe(n, rng));
    st.positions = sp.values;
    double c = std::sqrt(2.0 * t0 / n);
    for (double& v : st.positions) v *= c;
  } else {
    throw invalid_argument("simulate: zero-start needs a beta in {1,2} matrix model");
  }
  return st;
}

template <class Rng>
TrajectoryRecord simulate(const SdeConfig& cfg, Rng& rng,
                          const std::optional<ParticleState>& initial = std::nullopt) {
  cfg.validate();
  TrajectoryRecord rec;
  rec.config = cfg;
  rec.noise_totals.assign(cfg.n, 0.0);

  ParticleState st = initial ? *initial : zero_start_state(cfg, rng);
  if (!detail::state_valid(st.positions, cfg))
    throw singular_configuration_error("simulate: invalid initial state");
  const double t_start = st.t;

  rec.min_gap = std::numeric_limits<double>::infinity();
  auto note_gap = [&](const ParticleState& s) {
    for (int i = 0; i + 1 < s.n(); ++i)
      rec.min_gap = std::min(rec.min_gap, s.positions[i + 1] - s.positions[i]);
  };
  note_gap(st);

  const bool track_energy = cfg.family == SdeConfig::Family::dyson ||
                            cfg.family == SdeConfig::Family::generalized;
  for (double target : cfg.record_times) {
    while (st.t < target - 1e-12) {
      double dt = std::min(cfg.dt_max, target - st.t);
      st = detail::step_with_noise(st, dt, [&] {
        std::vector<double> db(st.n());
        double sd = std::sqrt(dt);
        for (double& v : db) v = sd * rng.normal();
        return db;
      }(), cfg, rng, 0, &rec);
      note_gap(st);
    }
    ParticleState snap = st;
    snap.t = target;
    rec.states.push_back(snap);
    if (track_energy && cfg.n >= 2) rec.energy_series.push_back(energy(st, cfg).e);
  }
  rec.total_time = st.t - t_start;
  return rec;
}

}  // namespace rmt

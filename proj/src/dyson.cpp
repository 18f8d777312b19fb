#include "rmt/dyson.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace rmt {

double SdeConfig::alpha() const {
  switch (family) {
    case Family::dyson: return static_cast<double>(n);
    case Family::generalized: return alpha_n;
    default: throw invalid_argument("alpha: defined for dyson/generalized families");
  }
}

double SdeConfig::betaN() const {
  switch (family) {
    case Family::dyson: return 2.0 * beta * n * n;  // 4N^2 at beta=2, 2N^2 at beta=1
    case Family::generalized: return beta_n;
    default: throw invalid_argument("betaN: defined for dyson/generalized families");
  }
}

double SdeConfig::noise_coefficient() const {
  switch (family) {
    case Family::dyson: return std::sqrt(2.0 / (beta * n));
    case Family::generalized: return 2.0 * std::sqrt(alpha_n / beta_n);
    case Family::ou: return std::sqrt(2.0 / n);
    default: throw invalid_argument("noise_coefficient: wishart diffusion is state-dependent");
  }
}

void SdeConfig::validate() const {
  if (n < 1) throw invalid_argument("SdeConfig: n must be >= 1");
  if (!(dt_max > 0.0)) throw invalid_argument("SdeConfig: dt_max must be > 0");
  if (!(t_end > 0.0)) throw invalid_argument("SdeConfig: t_end must be > 0");
  switch (family) {
    case Family::dyson:
      if (beta != 1.0 && beta != 2.0) throw invalid_argument("SdeConfig: dyson beta in {1,2}");
      break;
    case Family::generalized:
      if (!(alpha_n > 0.0) || !(beta_n > 0.0))
        throw invalid_argument("SdeConfig: generalized needs alpha_N, beta_N > 0");
      break;
    case Family::ou:
      if (!(theta > 0.0)) throw invalid_argument("SdeConfig: ou needs theta > 0");
      break;
    case Family::wishart:
      if (m < n) throw invalid_argument("SdeConfig: wishart requires M >= N");
      break;
  }
  for (std::size_t i = 0; i + 1 < record_times.size(); ++i)
    if (!(record_times[i] <= record_times[i + 1]))
      throw invalid_argument("SdeConfig: record_times must be sorted");
  if (!record_times.empty() && record_times.back() > t_end + 1e-12)
    throw invalid_argument("SdeConfig: record_times beyond t_end");
}

namespace detail {

bool state_valid(const std::vector<double>& x, const SdeConfig& cfg) {
  if (cfg.ordering_guard)
    for (std::size_t i = 0; i + 1 < x.size(); ++i)
      if (!(x[i] < x[i + 1])) return false;
  if (cfg.family == SdeConfig::Family::wishart && !x.empty() && x.front() < 0.0) return false;
  return true;
}

std::vector<double> diffusion(const std::vector<double>& x, const SdeConfig& cfg) {
  const int n = static_cast<int>(x.size());
  std::vector<double> sig(n);
  if (cfg.family == SdeConfig::Family::wishart) {
    for (int i = 0; i < n; ++i) sig[i] = std::sqrt(2.0 * std::max(x[i], 0.0) / n);
  } else {
    std::fill(sig.begin(), sig.end(), cfg.noise_coefficient());
  }
  return sig;
}

}  // namespace detail

namespace {

constexpr double kCap = 1.0 / detail::kEpsReg;

void require_strict(const std::vector<double>& x, const char* who) {
  for (std::size_t i = 0; i + 1 < x.size(); ++i)
    if (!(x[i] < x[i + 1]))
      throw singular_configuration_error(std::string(who) + ": coincident particles");
}

double capped_inv(double d) {
  double v = 1.0 / d;
  return std::clamp(v, -kCap, kCap);
}

// Shared kernel S_i = sum_{j != i} 1/(x_i - x_j), one pass over pairs using
// antisymmetry.
std::vector<double> interaction_sums(const std::vector<double>& x) {
  const int n = static_cast<int>(x.size());
  std::vector<double> s(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double v = capped_inv(x[j] - x[i]);
      s[j] += v;
      s[i] -= v;
    }
  return s;
}

}  // namespace

std::vector<double> drift(const ParticleState& state, const SdeConfig& cfg) {
  require_strict(state.positions, "drift");
  const auto& x = state.positions;
  const int n = state.n();
  std::vector<double> b(n, 0.0);
  switch (cfg.family) {
    case SdeConfig::Family::dyson: {
      auto s = interaction_sums(x);
      for (int i = 0; i < n; ++i) b[i] = s[i] / n;
      break;
    }
    case SdeConfig::Family::generalized: {
      auto s = interaction_sums(x);
      double c = cfg.alpha_n / (static_cast<double>(n) * n);
      for (int i = 0; i < n; ++i) b[i] = c * s[i];
      break;
    }
    case SdeConfig::Family::ou: {
      auto s = interaction_sums(x);
      for (int i = 0; i < n; ++i) b[i] = s[i] / n - cfg.theta * x[i];
      break;
    }
    case SdeConfig::Family::wishart: {
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          double v = capped_inv(x[j] - x[i]);
          double sum = x[i] + x[j];
          b[j] += sum * v;
          b[i] -= sum * v;
        }
      double mn = static_cast<double>(cfg.m) / n;
      for (int i = 0; i < n; ++i) b[i] = b[i] / n + mn;
      break;
    }
  }
  return b;
}

std::vector<double> drift_reference(const ParticleState& state, const SdeConfig& cfg) {
  require_strict(state.positions, "drift_reference");
  const auto& x = state.positions;
  const int n = state.n();
  std::vector<double> b(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      double v = capped_inv(x[i] - x[j]);
      if (cfg.family == SdeConfig::Family::wishart)
        acc += (x[i] + x[j]) * v;
      else
        acc += v;
    }
    switch (cfg.family) {
      case SdeConfig::Family::dyson: b[i] = acc / n; break;
      case SdeConfig::Family::generalized:
        b[i] = cfg.alpha_n / (static_cast<double>(n) * n) * acc;
        break;
      case SdeConfig::Family::ou: b[i] = acc / n - cfg.theta * x[i]; break;
      case SdeConfig::Family::wishart:
        b[i] = acc / n + static_cast<double>(cfg.m) / n;
        break;
    }
  }
  return b;
}

EnergyReport energy(const ParticleState& state, const SdeConfig& cfg) {
  if (state.n() < 2) throw invalid_argument("energy: need at least two particles");
  require_strict(state.positions, "energy");
  const auto& x = state.positions;
  const int n = state.n();
  const double a = cfg.alpha();
  const double bn = cfg.betaN();

  double norm2 = 0.0;
  for (double v : x) norm2 += v * v;
  double e_v = norm2 / n;

  double log_sum = 0.0, inv2_sum = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double d = x[j] - x[i];
      log_sum += std::log(d);
      inv2_sum += 1.0 / (d * d);
    }
  double e_w = -2.0 / (static_cast<double>(n) * n) * log_sum;
  // L E = 4a/bN + a(N-1)/N^2 + [4a/(N^2 bN) - 2a/N^4] sum_{i != j} 1/d^2
  double n2 = static_cast<double>(n) * n;
  double coeff = 4.0 * a / (n2 * bn) - 2.0 * a / (n2 * n2);
  double le = 4.0 * a / bn + a * (n - 1) / n2 + coeff * (2.0 * inv2_sum);

  return {e_v, e_w, e_v + e_w, le, norm2 / (2.0 * n) + 1.0 / 16.0};
}

double johansson_density(double t, std::span<const double> lambda0,
                         std::span<const double> lambda) {
  const int n = static_cast<int>(lambda.size());
  if (n < 1) throw invalid_argument("johansson_density: empty lambda");
  if (n > 10) throw invalid_argument("johansson_density: N above 10 unsupported");
  if (!(t > 0.0)) throw invalid_argument("johansson_density: t must be > 0");

  if (lambda0.empty()) {
    // zero start: (2 pi t)^{-N/2} / (1! ... N!) exp(-|l|^2/2t) D(l) D(l/t)
    double logv = -0.5 * n * std::log(2.0 * M_PI * t);
    for (int k = 1; k <= n; ++k) logv -= std::lgamma(static_cast<double>(k + 1));
    double norm2 = 0.0;
    for (double v : lambda) norm2 += v * v;
    logv -= norm2 / (2.0 * t);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        double d = std::abs(lambda[j] - lambda[i]);
        if (d == 0.0) return 0.0;
        logv += 2.0 * std::log(d) - std::log(t);
      }
    return std::exp(logv);
  }

  if (static_cast<int>(lambda0.size()) != n)
    throw invalid_argument("johansson_density: lambda0 size mismatch");
  for (int i = 0; i + 1 < n; ++i)
    if (!(lambda0[i] < lambda0[i + 1]))
      throw invalid_argument("johansson_density: lambda0 must be strictly increasing");

  // entries exp(-(l_i - l0_j)^2 / 2t) are in (0,1], so the determinant is safe
  Eigen::MatrixXd e(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double d = lambda[i] - lambda0[j];
      e(i, j) = std::exp(-d * d / (2.0 * t));
    }
  double det = e.determinant();
  double v = det / (std::tgamma(n + 1.0) * std::pow(2.0 * M_PI * t, 0.5 * n));
  return v * vandermonde(lambda) / vandermonde(lambda0);
}

double vandermonde(std::span<const double> lambda) {
  double p = 1.0;
  for (std::size_t i = 0; i < lambda.size(); ++i)
    for (std::size_t j = i + 1; j < lambda.size(); ++j) p *= lambda[j] - lambda[i];
  return p;
}

VandermondeReport vandermonde_and_harmonicity(std::span<const double> lambda) {
  const int n = static_cast<int>(lambda.size());
  if (n < 1 || n > 12) throw invalid_argument("vandermonde_and_harmonicity: need 1 <= N <= 12");
  const double h = 1e-4;
  std::vector<double> x(lambda.begin(), lambda.end());
  double f0 = vandermonde(x);
  double lap = 0.0;
  for (int i = 0; i < n; ++i) {
    double keep = x[i];
    x[i] = keep + h;
    double fp = vandermonde(x);
    x[i] = keep - h;
    double fm = vandermonde(x);
    x[i] = keep;
    lap += (fp - 2.0 * f0 + fm) / (h * h);
  }
  return {f0, lap};
}

MartingaleResidual martingale_residual(const TrajectoryRecord& traj, const TestFunction& f) {
  if (traj.config.family != SdeConfig::Family::dyson || traj.config.beta != 1.0)
    throw invalid_argument("martingale_residual: needs a dyson beta=1 trajectory");
  if (traj.states.size() < 100)
    throw insufficient_resolution_error("martingale_residual: fewer than 100 recorded times");

  const int n = traj.config.n;
  auto mean_f = [&](const ParticleState& s, const std::function<double(double)>& g) {
    double acc = 0.0;
    for (double v : s.positions) acc += g(v);
    return acc / n;
  };
  auto generator_term = [&](const ParticleState& s) {
    // (1/2) double-int (f'(x)-f'(y))/(x-y) + (1/2N) <mu, f''>
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double xi = s.positions[i], xj = s.positions[j];
        acc += xi == xj ? f.d2f(xi) : (f.df(xi) - f.df(xj)) / (xi - xj);
      }
    return 0.5 * acc / (static_cast<double>(n) * n) + mean_f(s, f.d2f) / (2.0 * n);
  };

  MartingaleResidual out;
  out.times.reserve(traj.states.size());
  out.path.reserve(traj.states.size());
  double base = mean_f(traj.states.front(), f.f);
  double integral = 0.0;
  double prev_g = generator_term(traj.states.front());
  double prev_t = traj.states.front().t;
  out.times.push_back(prev_t);
  out.path.push_back(0.0);
  for (std::size_t k = 1; k < traj.states.size(); ++k) {
    double g = generator_term(traj.states[k]);
    double t = traj.states[k].t;
    integral += 0.5 * (g + prev_g) * (t - prev_t);
    out.times.push_back(t);
    out.path.push_back(mean_f(traj.states[k], f.f) - base - integral);
    prev_g = g;
    prev_t = t;
  }
  double t_span = out.times.back() - out.times.front();
  out.bracket_bound = 2.0 * t_span * f.sup_df * f.sup_df / (static_cast<double>(n) * n);
  return out;
}

}  // namespace rmt

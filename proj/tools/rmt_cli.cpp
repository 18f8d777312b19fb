#include <CLI11.hpp>
#include <atomic>
#include <cstdlib>
#include <iostream>
#include <thread>

#include "rmt/burgers.hpp"
#include "rmt/dyson.hpp"
#include "rmt/ensembles.hpp"
#include "rmt/io.hpp"
#include "rmt/kernels.hpp"
#include "rmt/ldp.hpp"
#include "rmt/measures.hpp"
#include "rmt/numerics.hpp"
#include "rmt/rng.hpp"
#include "rmt/stieltjes.hpp"

using namespace rmt;

namespace {

int resolve_threads(int flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("RMT_LAB_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(trial) for trial in [0, trials); results must be written into
// per-trial slots so the outcome is independent of the thread count.
void parallel_trials(long trials, int threads, const std::function<void(long)>& fn) {
  if (threads <= 1 || trials <= 1) {
    for (long t = 0; t < trials; ++t) fn(t);
    return;
  }
  std::atomic<long> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < threads; ++w)
    pool.emplace_back([&] {
      for (;;) {
        long t = next.fetch_add(1);
        if (t >= trials) return;
        fn(t);
      }
    });
  for (auto& th : pool) th.join();
}

struct HistogramSpec {
  double lo, hi;
  int bins;
};

std::vector<double> histogram_density(const std::vector<double>& values, HistogramSpec h) {
  std::vector<double> d(h.bins, 0.0);
  double w = (h.hi - h.lo) / h.bins;
  for (double v : values) {
    int b = static_cast<int>((v - h.lo) / w);
    if (b >= 0 && b < h.bins) d[b] += 1.0;
  }
  for (double& x : d) x /= values.size() * w;
  return d;
}

struct EsdOptions {
  std::string ensemble = "gue";
  int n = 256;
  int m = 0;
  long trials = 10;
  std::uint64_t seed = 1;
  std::string ref = "semicircle";
  double beta = 1.0, theta = 0.5, c = 0.5;
  int bins = 100;
  int threads = 0;
  std::string out = "esd";
};

int run_esd(const EsdOptions& o) {
  ConfigEcho cfg{{"command", "esd"},        {"ensemble", o.ensemble},
                 {"n", std::to_string(o.n)}, {"m", std::to_string(o.m)},
                 {"trials", std::to_string(o.trials)},
                 {"seed", std::to_string(o.seed)},
                 {"ref", o.ref},
                 {"beta", format_double(o.beta)},
                 {"theta", format_double(o.theta)},
                 {"c", format_double(o.c)},
                 {"bins", std::to_string(o.bins)}};
  const bool planar = o.ensemble == "ginibre" && o.ref == "circular";
  if (planar) {
    std::vector<double> inside(o.trials), radial_ks(o.trials);
    std::vector<std::vector<double>> all_mod(o.trials);
    parallel_trials(o.trials, resolve_threads(o.threads), [&](long t) {
      RngStream rng(o.seed, static_cast<std::uint64_t>(t));
      ComplexSpectrum sp = eigenvalues_complex(sample_ginibre(o.n, rng));
      std::vector<double> mods;
      mods.reserve(o.n);
      long in = 0;
      for (auto z : sp.values) {
        double r = std::abs(z) / std::sqrt(static_cast<double>(o.n));
        mods.push_back(r);
        if (r <= 1.0) ++in;
      }
      std::sort(mods.begin(), mods.end());
      inside[t] = static_cast<double>(in) / o.n;
      radial_ks[t] = ks_statistic(mods, [](double r) {
        return r <= 0.0 ? 0.0 : (r >= 1.0 ? 1.0 : r * r);
      });
      all_mod[t] = std::move(mods);
    });
    std::vector<double> merged;
    for (auto& v : all_mod) merged.insert(merged.end(), v.begin(), v.end());
    auto dens = histogram_density(merged, {0.0, 1.5, o.bins});
    std::vector<std::vector<double>> rows;
    for (int b = 0; b < o.bins; ++b)
      rows.push_back({1.5 * b / o.bins, 1.5 * (b + 1) / o.bins, dens[b]});
    write_csv(o.out + ".csv", cfg, {"bin_left", "bin_right", "density"}, rows);
    double mean_in = 0.0, mean_ks = 0.0;
    for (long t = 0; t < o.trials; ++t) {
      mean_in += inside[t];
      mean_ks += radial_ks[t];
    }
    JsonWriter j;
    j.set("fraction_inside_disk", mean_in / o.trials);
    j.set("radial_ks_distance", mean_ks / o.trials);
    j.write(o.out + ".json", cfg);
    return 0;
  }

  ReferenceLaw law = o.ref == "semicircle"        ? ReferenceLaw::semicircle()
                     : o.ref == "semicircle-beta" ? ReferenceLaw::semicircle_beta(o.beta)
                     : o.ref == "ou"              ? ReferenceLaw::ou_limit(o.theta)
                     : o.ref == "mp" ? ReferenceLaw::marchenko_pastur(o.c)
                                     : throw invalid_argument("esd: unknown ref " + o.ref);
  GridMeasure ref = law.discretize(512);
  std::vector<double> bl(o.trials), ks(o.trials);
  std::vector<std::vector<double>> atoms(o.trials);
  parallel_trials(o.trials, resolve_threads(o.threads), [&](long t) {
    RngStream rng(o.seed, static_cast<std::uint64_t>(t));
    Spectrum sp;
    double scale = 1.0;
    if (o.ensemble == "gue") {
      sp = eigenvalues_hermitian(sample_gue(o.n, rng));
      scale = 1.0 / std::sqrt(static_cast<double>(o.n));
    } else if (o.ensemble == "goe") {
      sp = eigenvalues_hermitian(sample_goe(o.n, rng));
      scale = 1.0 / std::sqrt(static_cast<double>(o.n));
    } else if (o.ensemble == "wishart") {
      sp = eigenvalues_hermitian(sample_wishart(o.n, o.m, rng));
    } else {
      throw invalid_argument("esd: ensemble " + o.ensemble + " has a complex spectrum");
    }
    EmpiricalMeasure mu = empirical_from_spectrum(sp, scale);
    bl[t] = bl_distance(mu, ref);
    ks[t] = ks_statistic(mu.atoms, [&](double x) { return law.cdf(x); });
    atoms[t] = std::move(mu.atoms);
  });
  auto [lo, hi] = law.support();
  double pad = 0.25 * (hi - lo);
  std::vector<double> merged;
  for (auto& v : atoms) merged.insert(merged.end(), v.begin(), v.end());
  auto dens = histogram_density(merged, {lo - pad, hi + pad, o.bins});
  std::vector<std::vector<double>> rows;
  double w = (hi - lo + 2 * pad) / o.bins;
  for (int b = 0; b < o.bins; ++b)
    rows.push_back({lo - pad + b * w, lo - pad + (b + 1) * w, dens[b]});
  write_csv(o.out + ".csv", cfg, {"bin_left", "bin_right", "density"}, rows);
  double mbl = 0.0, mks = 0.0;
  for (long t = 0; t < o.trials; ++t) {
    mbl += bl[t];
    mks += ks[t];
  }
  JsonWriter j;
  j.set("bl_distance", mbl / o.trials);
  j.set("ks_distance", mks / o.trials);
  j.write(o.out + ".json", cfg);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"random-matrix laboratory"};
  app.require_subcommand(1);

  // ---- sample ----
  std::string s_ensemble = "gue";
  int s_n = 8, s_m = 8, s_threads = 0;
  long s_trials = 1;
  std::uint64_t s_seed = 1;
  std::string s_out = "sample.csv";
  auto* sample_cmd = app.add_subcommand("sample", "draw ensembles and dump spectra");
  sample_cmd->add_option("--ensemble", s_ensemble);
  sample_cmd->add_option("--n", s_n);
  sample_cmd->add_option("--m", s_m);
  sample_cmd->add_option("--trials", s_trials);
  sample_cmd->add_option("--seed", s_seed);
  sample_cmd->add_option("--threads", s_threads);
  sample_cmd->add_option("--out", s_out);

  // ---- esd ----
  EsdOptions esd;
  auto* esd_cmd = app.add_subcommand("esd", "empirical spectral distribution vs a reference law");
  esd_cmd->add_option("--ensemble", esd.ensemble);
  esd_cmd->add_option("--n", esd.n);
  esd_cmd->add_option("--m", esd.m);
  esd_cmd->add_option("--trials", esd.trials);
  esd_cmd->add_option("--seed", esd.seed);
  esd_cmd->add_option("--ref", esd.ref);
  esd_cmd->add_option("--beta", esd.beta);
  esd_cmd->add_option("--theta", esd.theta);
  esd_cmd->add_option("--c", esd.c);
  esd_cmd->add_option("--bins", esd.bins);
  esd_cmd->add_option("--threads", esd.threads);
  esd_cmd->add_option("--out", esd.out);

  // ---- kernel ----
  std::string k_family = "gue";
  int k_n = 5, k_grid = 200;
  double k_xmax = 0.0;
  std::string k_out = "kernel.csv";
  auto* kernel_cmd = app.add_subcommand("kernel", "evaluate determinantal kernels");
  kernel_cmd->add_option("--family", k_family);
  kernel_cmd->add_option("--n", k_n);
  kernel_cmd->add_option("--grid", k_grid);
  kernel_cmd->add_option("--xmax", k_xmax);
  kernel_cmd->add_option("--out", k_out);

  // ---- dyson ----
  std::string d_family = "dyson";
  int d_n = 32, d_m = 0, d_records = 100, d_threads = 0;
  double d_beta = 2.0, d_theta = 0.5, d_alpha = 0.0, d_beta_n = 0.0;
  double d_t_end = 1.0, d_dt_max = 1e-3, d_init_lo = 0.0, d_init_hi = 0.0;
  bool d_zero_start = false;
  std::uint64_t d_seed = 1;
  std::string d_out = "dyson";
  auto* dyson_cmd = app.add_subcommand("dyson", "simulate interacting-particle SDEs");
  dyson_cmd->add_option("--family", d_family);
  dyson_cmd->add_option("--n", d_n);
  dyson_cmd->add_option("--beta", d_beta);
  dyson_cmd->add_option("--theta", d_theta);
  dyson_cmd->add_option("--m", d_m);
  dyson_cmd->add_option("--alpha", d_alpha);
  dyson_cmd->add_option("--beta-n", d_beta_n);
  dyson_cmd->add_option("--t-end", d_t_end);
  dyson_cmd->add_option("--dt-max", d_dt_max);
  dyson_cmd->add_option("--record", d_records, "number of uniform record times");
  dyson_cmd->add_flag("--zero-start", d_zero_start);
  dyson_cmd->add_option("--init-lo", d_init_lo);
  dyson_cmd->add_option("--init-hi", d_init_hi);
  dyson_cmd->add_option("--seed", d_seed);
  dyson_cmd->add_option("--threads", d_threads);
  dyson_cmd->add_option("--out", d_out);

  // ---- burgers ----
  std::string b_flow = "dyson", b_initial = "delta0", b_z = "0,1", b_out = "burgers.csv";
  double b_theta = 1.0, b_t = 1.0, b_h = 1e-4;
  auto* burgers_cmd = app.add_subcommand("burgers", "characteristic solve of the Stieltjes flow");
  burgers_cmd->add_option("--flow", b_flow);
  burgers_cmd->add_option("--theta", b_theta);
  burgers_cmd->add_option("--t", b_t);
  burgers_cmd->add_option("--z-grid", b_z, "semicolon-separated re,im pairs");
  burgers_cmd->add_option("--initial", b_initial);
  burgers_cmd->add_option("--h", b_h);
  burgers_cmd->add_option("--out", b_out);

  // ---- ldp ----
  double l_beta = 1.0;
  int l_cells = 512, l_iters = 4000;
  std::string l_out = "ldp";
  auto* ldp_cmd = app.add_subcommand("ldp", "equilibrium-measure solve and energies");
  ldp_cmd->add_option("--beta", l_beta);
  ldp_cmd->add_option("--grid-cells", l_cells);
  ldp_cmd->add_option("--iters", l_iters);
  ldp_cmd->add_option("--out", l_out);

  // ---- holeprob ----
  std::vector<double> h_r;
  std::string h_out = "holeprob.csv";
  auto* hole_cmd = app.add_subcommand("holeprob", "infinite-Ginibre hole probabilities");
  hole_cmd->add_option("--r", h_r)->required();
  hole_cmd->add_option("--out", h_out);

  // ---- gumbel ----
  int g_n = 500, g_threads = 0;
  long g_trials = 10000;
  std::uint64_t g_seed = 1;
  std::string g_out = "gumbel";
  auto* gumbel_cmd = app.add_subcommand("gumbel", "spectral-radius fluctuation rescaling");
  gumbel_cmd->add_option("--n", g_n);
  gumbel_cmd->add_option("--trials", g_trials);
  gumbel_cmd->add_option("--seed", g_seed);
  gumbel_cmd->add_option("--threads", g_threads);
  gumbel_cmd->add_option("--out", g_out);

  try {
    app.parse(argc, argv);

    if (sample_cmd->parsed()) {
      ConfigEcho cfg{{"command", "sample"},      {"ensemble", s_ensemble},
                     {"n", std::to_string(s_n)},  {"m", std::to_string(s_m)},
                     {"trials", std::to_string(s_trials)},
                     {"seed", std::to_string(s_seed)}};
      std::vector<std::vector<std::vector<double>>> rows(s_trials);
      parallel_trials(s_trials, resolve_threads(s_threads), [&](long t) {
        RngStream rng(s_seed, static_cast<std::uint64_t>(t));
        auto& out = rows[t];
        if (s_ensemble == "gue" || s_ensemble == "goe" || s_ensemble == "wishart") {
          Spectrum sp = s_ensemble == "gue" ? eigenvalues_hermitian(sample_gue(s_n, rng))
                        : s_ensemble == "goe"
                            ? eigenvalues_hermitian(sample_goe(s_n, rng))
                            : eigenvalues_hermitian(sample_wishart(s_n, s_m, rng));
          for (int i = 0; i < sp.n(); ++i)
            out.push_back({static_cast<double>(t), static_cast<double>(i), sp.values[i], 0.0});
        } else if (s_ensemble == "ginibre") {
          ComplexSpectrum sp = eigenvalues_complex(sample_ginibre(s_n, rng));
          for (int i = 0; i < sp.n(); ++i)
            out.push_back({static_cast<double>(t), static_cast<double>(i),
                           sp.values[i].real(), sp.values[i].imag()});
        } else if (s_ensemble == "haar") {
          Eigen::MatrixXcd u = sample_haar_unitary(s_n, rng);
          double err = (u * u.adjoint() - Eigen::MatrixXcd::Identity(s_n, s_n))
                           .cwiseAbs()
                           .maxCoeff();
          out.push_back({static_cast<double>(t), 0.0, err, std::arg(u(0, 0))});
        } else {
          throw invalid_argument("sample: unknown ensemble " + s_ensemble);
        }
      });
      std::vector<std::vector<double>> flat;
      for (auto& r : rows) flat.insert(flat.end(), r.begin(), r.end());
      write_csv(s_out, cfg, {"trial", "i", "re", "im"}, flat);
      return 0;
    }

    if (esd_cmd->parsed()) return run_esd(esd);

    if (kernel_cmd->parsed()) {
      ConfigEcho cfg{{"command", "kernel"}, {"family", k_family}, {"n", std::to_string(k_n)}};
      std::vector<std::vector<double>> rows;
      if (k_family == "gue") {
        double xmax = k_xmax > 0 ? k_xmax : 2.5 * std::sqrt(static_cast<double>(k_n));
        for (int i = 0; i <= k_grid; ++i) {
          double x = -xmax + 2 * xmax * i / k_grid;
          rows.push_back({x, gue_kernel(k_n, x, x), gue_density1(k_n, x)});
        }
        write_csv(k_out, cfg, {"x", "kernel_diag", "density1"}, rows);
      } else if (k_family == "ginibre" || k_family == "ginibre-inf") {
        double rmax = k_xmax > 0 ? k_xmax : 1.5 * std::sqrt(static_cast<double>(k_n));
        for (int i = 0; i <= k_grid; ++i) {
          double r = rmax * i / k_grid;
          double dens = k_family == "ginibre"
                            ? ginibre_density1(k_n, {r, 0.0})
                            : ginibre_kernel_infinite({r, 0.0}, {r, 0.0}).real();
          rows.push_back({r, dens});
        }
        write_csv(k_out, cfg, {"r", "density1"}, rows);
      } else {
        throw invalid_argument("kernel: unknown family " + k_family);
      }
      return 0;
    }

    if (dyson_cmd->parsed()) {
      SdeConfig cfg;
      cfg.family = d_family == "dyson"         ? SdeConfig::Family::dyson
                   : d_family == "ou"          ? SdeConfig::Family::ou
                   : d_family == "wishart"     ? SdeConfig::Family::wishart
                   : d_family == "generalized" ? SdeConfig::Family::generalized
                                               : throw invalid_argument("dyson: unknown family");
      cfg.n = d_n;
      cfg.beta = d_beta;
      cfg.theta = d_theta;
      cfg.m = d_m;
      cfg.alpha_n = d_alpha;
      cfg.beta_n = d_beta_n;
      cfg.t_end = d_t_end;
      cfg.dt_max = d_dt_max;
      for (int i = 1; i <= d_records; ++i) cfg.record_times.push_back(d_t_end * i / d_records);
      RngStream rng(d_seed, 0);
      std::optional<ParticleState> init;
      if (!d_zero_start) {
        double lo = d_init_lo, hi = d_init_hi;
        if (!(lo < hi)) {
          lo = cfg.family == SdeConfig::Family::wishart ? 0.5 : -1.0;
          hi = cfg.family == SdeConfig::Family::wishart ? 1.5 : 1.0;
        }
        ParticleState st;
        st.t = 0.0;
        for (int i = 0; i < d_n; ++i)
          st.positions.push_back(lo + (hi - lo) * (i + 0.5) / d_n);
        init = st;
      }
      TrajectoryRecord rec = simulate(cfg, rng, init);
      ConfigEcho echo{{"command", "dyson"},        {"family", d_family},
                      {"n", std::to_string(d_n)},   {"beta", format_double(d_beta)},
                      {"theta", format_double(d_theta)},
                      {"m", std::to_string(d_m)},
                      {"t_end", format_double(d_t_end)},
                      {"dt_max", format_double(d_dt_max)},
                      {"seed", std::to_string(d_seed)},
                      {"zero_start", d_zero_start ? "1" : "0"}};
      write_trajectory_csv(d_out + ".csv", echo, rec);
      JsonWriter j;
      j.set("min_gap", rec.min_gap);
      j.set("step_rejections", static_cast<double>(rec.step_rejections));
      j.set("total_time", rec.total_time);
      if (!rec.energy_series.empty()) j.set("energy_series", rec.energy_series);
      j.write(d_out + ".json", echo);
      return 0;
    }

    if (burgers_cmd->parsed()) {
      CharacteristicQuery::Flow flow = b_flow == "ou" ? CharacteristicQuery::Flow::ou
                                                      : CharacteristicQuery::Flow::dyson;
      StieltjesField s0 = b_initial == "semicircle" ? stieltjes_field_semicircle()
                                                    : stieltjes_field_delta0();
      std::vector<std::vector<double>> rows;
      std::stringstream zs(b_z);
      std::string tok;
      while (std::getline(zs, tok, ';')) {
        auto comma = tok.find(',');
        if (comma == std::string::npos)
          throw invalid_argument("burgers: z entries must be re,im pairs");
        Complex z{std::stod(tok.substr(0, comma)), std::stod(tok.substr(comma + 1))};
        CharacteristicQuery q{};
        q.flow = flow;
        q.s0 = s0;
        q.t = b_t;
        q.z = z;
        q.theta = b_theta;
        CharacteristicSolution sol = solve_characteristic(q);
        double res = burgers_residual(flow, s0, b_t, z, b_h, b_theta);
        rows.push_back({b_t, z.real(), z.imag(), sol.s_value.real(), sol.s_value.imag(), res});
      }
      ConfigEcho echo{{"command", "burgers"}, {"flow", b_flow},
                      {"theta", format_double(b_theta)},
                      {"t", format_double(b_t)},
                      {"initial", b_initial},
                      {"h", format_double(b_h)}};
      write_csv(b_out, echo, {"t", "re_z", "im_z", "re_S", "im_S", "residual"}, rows);
      return 0;
    }

    if (ldp_cmd->parsed()) {
      double edge = std::sqrt(2.0 * l_beta);
      GridMeasure grid = uniform_grid_measure(-edge - 0.5, edge + 0.5, l_cells);
      auto [mu, rep] = solve_equilibrium(l_beta, grid, l_iters);
      ConfigEcho echo{{"command", "ldp"},
                      {"beta", format_double(l_beta)},
                      {"grid_cells", std::to_string(l_cells)},
                      {"iters", std::to_string(l_iters)}};
      write_grid_csv(l_out + ".csv", echo, mu);
      FrostmanReport fr = frostman_residual(mu, l_beta);
      JsonWriter j;
      j.set("iterations", static_cast<double>(rep.iterations));
      j.set("final_energy", rep.final_energy);
      j.set("bl_distance_to_sigma_beta", rep.bl_distance_to_sigma_beta);
      j.set("converged", rep.converged ? 1.0 : 0.0);
      j.set("minus_F_beta", -F_constant(l_beta));
      j.set("frostman_residual_sup", fr.residual_sup);
      j.set("frostman_violations", static_cast<double>(fr.inequality_violations));
      j.write(l_out + ".json", echo);
      return 0;
    }

    if (hole_cmd->parsed()) {
      std::vector<std::vector<double>> rows;
      for (double r : h_r) {
        HoleProbability hp = hole_probability(r);
        rows.push_back({r, hp.log_prob, hp.log_prob / (r * r * r * r)});
      }
      ConfigEcho echo{{"command", "holeprob"}};
      write_csv(h_out, echo, {"r", "log_prob", "log_prob_over_r4"}, rows);
      return 0;
    }

    if (gumbel_cmd->parsed()) {
      GumbelRescale rescale(g_n);
      std::vector<double> xs(g_trials);
      parallel_trials(g_trials, resolve_threads(g_threads), [&](long t) {
        RngStream rng(g_seed, static_cast<std::uint64_t>(t));
        auto mods = sample_ginibre_moduli(g_n, rng);
        double rho = *std::max_element(mods.begin(), mods.end()) /
                     std::sqrt(static_cast<double>(g_n));
        xs[t] = rescale(rho);
      });
      std::sort(xs.begin(), xs.end());
      double ks = ks_statistic(xs, [](double x) { return std::exp(-std::exp(-x)); });
      ConfigEcho echo{{"command", "gumbel"},
                      {"n", std::to_string(g_n)},
                      {"trials", std::to_string(g_trials)},
                      {"seed", std::to_string(g_seed)}};
      std::vector<std::vector<double>> rows;
      for (double x : xs) rows.push_back({x});
      write_csv(g_out + ".csv", echo, {"rescaled_max"}, rows);
      JsonWriter j;
      j.set("kappa", rescale.kappa);
      j.set("center", rescale.center);
      j.set("scale", rescale.scale);
      j.set("ks_distance", ks);
      j.write(g_out + ".json", echo);
      return 0;
    }
  } catch (const CLI::ParseError& e) {
    std::cerr << "{\"error\":\"usage\",\"what\":\"" << e.what() << "\"}\n";
    return 2;
  } catch (const invalid_argument& e) {
    std::cerr << "{\"error\":\"validation\",\"what\":\"" << e.what() << "\"}\n";
    return 2;
  } catch (const numerical_error& e) {
    std::cerr << "{\"error\":\"numerical\",\"what\":\"" << e.what() << "\"}\n";
    return 3;
  }
  return 0;
}

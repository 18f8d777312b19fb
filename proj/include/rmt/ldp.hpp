#pragma once

#include <cstdint>

#include "rmt/measures.hpp"

namespace rmt {

// Free entropy Sigma(mu) = int int log|x-y| dmu dmu for a histogram measure,
// with the exact closed-form log integral on every cell pair (the diagonal
// self-cell term included). <= 4096 cells.
double free_entropy(const GridMeasure& mu);

struct EnergyBreakdown {
  double sigma_entropy;  // Sigma(mu)
  double potential;      // int x^2/2 dmu
  double h_beta;         // -(beta/2) Sigma + potential
  double i_beta;         // h_beta + f_beta
  double f_beta;
  double beta;
};
EnergyBreakdown energy_H(const GridMeasure& mu, double beta);

// lim (1/N^2) log Z_beta^N = (beta/4) log(beta/2) - 3 beta/8. The flat -3/8
// sometimes quoted only matches at beta = 1; the Selberg formula and
// inf H_beta = -F(beta) force the beta-proportional constant.
double F_constant(double beta);

// log of the Selberg normalization Z_beta^N, exact, N <= 10^4.
double selberg_log_z(int n, double beta);

struct FrostmanReport {
  double c_beta;           // fitted constant in beta U(x) - x^2/2 = c on supp
  double residual_sup;     // max deviation over support cells
  int inequality_violations;  // off-support cells with beta U > x^2/2 + c + 1e-6
};
FrostmanReport frostman_residual(const GridMeasure& mu, double beta);

struct EquilibriumSolveReport {
  int iterations;
  double final_energy;
  double bl_distance_to_sigma_beta;
  bool converged;
};

// Entropic mirror descent on cell masses minimizing the discretized H_beta;
// multiplicative updates keep the iterate a strictly positive probability
// vector. grid supplies the nodes (its masses are the starting point; pass a
// uniform measure for the default initialization).
std::pair<GridMeasure, EquilibriumSolveReport> solve_equilibrium(double beta,
                                                                 const GridMeasure& grid,
                                                                 int max_iters);
GridMeasure uniform_grid_measure(double lo, double hi, int cells);

struct LdpProbeResult {
  double log_freq_over_n2;  // -inf sentinel when count == 0
  long count;
  long trials;
};

// Monte Carlo frequency of {bl(ESD, sigma_beta) >= eps} for the beta in {1,2}
// matrix ensembles; a diagnostic, not a rate-function estimator.
LdpProbeResult ldp_probe(double beta, int n, long trials, double epsilon,
                         std::uint64_t seed);

// Rate function of the largest eigenvalue: x^2/2 - int log|x-y| dsigma_1 -
// (log 2 + 1)/2 for x >= sqrt(2), +inf below.
double largest_eigenvalue_rate(double x);

}  // namespace rmt

#pragma once

#include <cstdint>

#include "topochain/models.hpp"

namespace topochain {

// Grand-canonical site occupations n_i = sum_n f(eps_n) |U_in|^2 on an open
// chain (free fermions, so the one-body reduction is exact).
struct OccupationProfile {
    double beta = 0.0, mu = 0.0;
    std::vector<double> n;  // per site, each in [0,1]
};

OccupationProfile occupations(const OpenChain& chain, double beta, double mu);

// Same occupations from a precomputed eigendecomposition of the chain
// matrix: the fast path when sweeping beta at fixed chain.
std::vector<double> occupations_from_modes(const EigResult& modes, double beta,
                                           double mu);

// |mean over edge sites - mean over bulk sites| of the occupations.
double merit_average(const OpenChain& chain, double beta, double mu);
double merit_average_profile(const OpenChain& chain, const std::vector<double>& n);

// min over (edge, bulk) pairs of |n_i - n_j|.
double merit_min(const OpenChain& chain, double beta, double mu);
double merit_min_profile(const OpenChain& chain, const std::vector<double>& n);

// Dispersionless limit (SSH alpha = -1): the chain decouples into intercell
// dimers at +-2 plus two free end sites at 0, so
//   Lambda = f(0) - (f(2) + f(-2))/2
// with f the Fermi factor at (mu, beta). alpha = +1 decouples into intracell
// dimers with no free ends: Lambda = 0. Other alpha: ValidationError.
double flat_band_oracle(double alpha, double beta, double mu);

struct DisorderStats {
    int trials = 0;
    double mean_avg = 0.0, std_avg = 0.0, min_avg = 0.0;
    double mean_min = 0.0, std_min = 0.0, min_min = 0.0;
};

// Scrambled per-trial seed stream: splitmix64 over the root seed and the
// 1-based trial index. Frozen so ensembles are reproducible.
std::uint64_t derive_trial_seed(std::uint64_t root, int trial);

// Both figures of merit over `trials` seeded disorder realizations at
// strength W; per-trial seeds derive from `seed`, trials run in parallel,
// statistics use the sample std (n-1). threads = 0 picks the hardware count.
DisorderStats disorder_robustness(const BlochModel& model, int L, double beta,
                                  double mu, double W, int trials,
                                  std::uint64_t seed, int threads = 0);

}  // namespace topochain

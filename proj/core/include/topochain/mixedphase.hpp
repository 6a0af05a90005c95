#pragma once

#include <optional>
#include <vector>

#include "topochain/topology.hpp"

namespace topochain {

inline constexpr double kWeightTol = 1e-12;   // degeneracy flag on |w+ - w-|
inline constexpr double kArgConditionTol = 1e-10;

// The spectral form of the one-body density matrix along the loop:
// rho(k) ~ sum_j w_j(k) |mu_j(k)><mu_j(k)| with Fermi weights
// w_j(k) = 1/(e^{beta (eps_j(k) - mu)} + 1). Weights are independent Fermi
// factors, not probabilities of one particle; they need not sum to 1.
struct MixedPath {
    BandData bands;
    std::vector<double> w_minus, w_plus;
    double beta = 0.0, mu = 0.0;
    bool degenerate = false;  // max_k |w_plus - w_minus| < kWeightTol
};

MixedPath build_mixed_path(const BlochModel& model, const BZGrid& grid,
                           double beta, double mu);

enum class PhaseBranch { FiniteTGapped, InfiniteT, GaplessIllDefined };

const char* to_string(PhaseBranch b);

struct PhaseResult {
    std::optional<double> value;  // nullopt = undefined (gapless at finite T)
    PhaseBranch branch = PhaseBranch::FiniteTGapped;
    double sigma_magnitude = 0.0;          // |Sigma| fed to arg
    cdouble holonomy_minus{1.0, 0.0};      // per-band Wilson products W_j
    cdouble holonomy_plus{1.0, 0.0};
    double discrete_vs_closed = 0.0;       // |e^{i g_disc} - e^{i g_closed}|
};

// Kinematic phase of the weighted spectral path:
//   gamma = arg sum_j w_j(pi) W_j,  W_j = prod_m u_jm/|u_jm|,
//   u_jm = <mu_j(k_m)|mu_j(k_{m+1})>.
// Normalizing each link strips the O(dk^2) modulus decay, leaving the pure
// parallel-transport holonomy; the closed loop makes it gauge-invariant.
// beta = 0: the weights are all 1/2 and the k-independent eigenbasis
// (1,0)/(0,1) satisfies the degenerate-block transport condition, so the
// value is exactly 0. Finite beta with a gapless spectrum: undefined.
// IllConditionedArg if |Sigma| < kArgConditionTol; MeshError on a dead link.
PhaseResult geometric_phase_discrete(const MixedPath& path);

// arg[w_-(pi) e^{i gamma_-} + w_+(pi) e^{i gamma_+}]; with the band phases
// locked to gamma_- = -gamma_+ = pi nu this collapses to arg[cos(pi nu)].
double geometric_phase_closed_form(const MixedPath& path,
                                   double gamma_minus, double gamma_plus);

// (1 - delta_{beta,0}) arg[cos(pi nu)]: pi in the nontrivial phase at any
// finite temperature, 0 otherwise, undefined for a gapless spectrum at
// finite temperature. Cross-checks the discrete evaluation against the
// closed form and records the discrepancy in diagnostics.
PhaseResult topological_measure(const BlochModel& model, const BZGrid& grid,
                                double beta, double mu);

// Discrete parallel transport: rephase each successive vector so every link
// overlap is real positive. The end-vs-start overlap of the returned frame
// carries the loop holonomy. Input is the closed sequence without the
// repeated endpoint.
std::vector<Eigen::Vector2cd> parallel_transport_path(
    const std::vector<Eigen::Vector2cd>& frame);

}  // namespace topochain

#include "topochain/mixedphase.hpp"

#include <cmath>

namespace topochain {

const char* to_string(PhaseBranch b) {
    switch (b) {
        case PhaseBranch::FiniteTGapped: return "FiniteTGapped";
        case PhaseBranch::InfiniteT: return "InfiniteT";
        case PhaseBranch::GaplessIllDefined: return "GaplessIllDefined";
    }
    return "?";
}

MixedPath build_mixed_path(const BlochModel& model, const BZGrid& grid,
                           double beta, double mu) {
    if (!(beta >= 0.0) || !std::isfinite(beta))
        throw ValidationError("mixed path requires finite beta >= 0");
    MixedPath path;
    path.bands = sample_bands(model, grid);
    path.beta = beta;
    path.mu = mu;
    const int N = grid.N_k;
    path.w_minus.resize(N);
    path.w_plus.resize(N);
    double split = 0.0;
    for (int m = 0; m < N; ++m) {
        path.w_minus[m] = fermi_weight(path.bands.e_minus[m], mu, beta);
        path.w_plus[m] = fermi_weight(path.bands.e_plus[m], mu, beta);
        split = std::max(split, std::abs(path.w_plus[m] - path.w_minus[m]));
    }
    path.degenerate = split < kWeightTol;
    return path;
}

PhaseResult geometric_phase_discrete(const MixedPath& path) {
    PhaseResult res;
    if (path.beta == 0.0) {
        // All weights are exactly 1/2 and the k-independent basis (1,0)/(0,1)
        // satisfies the degenerate-block transport condition: both holonomies
        // are 1, the weighted sum is real positive, the phase is exactly 0.
        res.value = 0.0;
        res.branch = PhaseBranch::InfiniteT;
        res.sigma_magnitude = 1.0;
        return res;
    }
    if (!path.bands.gapped()) {
        res.branch = PhaseBranch::GaplessIllDefined;
        return res;
    }
    res.branch = PhaseBranch::FiniteTGapped;
    res.holonomy_minus = band_holonomy(path.bands, -1);
    res.holonomy_plus = band_holonomy(path.bands, +1);
    // Endpoint weights: k = pi is the wrapped first grid point.
    const cdouble sigma = path.w_minus[0] * res.holonomy_minus +
                          path.w_plus[0] * res.holonomy_plus;
    res.sigma_magnitude = std::abs(sigma);
    if (res.sigma_magnitude < kArgConditionTol)
        throw IllConditionedArg("weighted holonomy sum has modulus " +
                                std::to_string(res.sigma_magnitude) +
                                "; its phase is meaningless");
    res.value = principal_phase(std::arg(sigma));
    return res;
}

double geometric_phase_closed_form(const MixedPath& path, double gamma_minus,
                                   double gamma_plus) {
    if (path.beta <= 0.0)
        throw ValidationError("closed form needs beta > 0 (use the infinite-T branch at beta = 0)");
    if (!path.bands.gapped())
        throw GaplessError("closed form needs a gapped spectrum");
    const cdouble sigma = path.w_minus[0] * std::polar(1.0, gamma_minus) +
                          path.w_plus[0] * std::polar(1.0, gamma_plus);
    if (std::abs(sigma) < kArgConditionTol)
        throw IllConditionedArg("weighted phase sum has modulus " +
                                std::to_string(std::abs(sigma)) +
                                "; its phase is meaningless");
    return principal_phase(std::arg(sigma));
}

PhaseResult topological_measure(const BlochModel& model, const BZGrid& grid,
                                double beta, double mu) {
    if (!(beta >= 0.0) || !std::isfinite(beta))
        throw ValidationError("topological measure requires finite beta >= 0");
    PhaseResult res;
    if (beta == 0.0) {
        res.value = 0.0;  // any spectrum: the common factor 1/2 carries no phase
        res.branch = PhaseBranch::InfiniteT;
        res.sigma_magnitude = 1.0;
        return res;
    }
    const MixedPath path = build_mixed_path(model, grid, beta, mu);
    if (!path.bands.gapped()) {
        res.branch = PhaseBranch::GaplessIllDefined;
        return res;
    }
    const int nu = winding_number(model, grid);
    // arg[cos(pi nu)]: pi for odd winding, 0 for even, at any finite beta.
    const double closed = nu % 2 == 0 ? 0.0 : M_PI;

    const PhaseResult discrete = geometric_phase_discrete(path);
    res.branch = PhaseBranch::FiniteTGapped;
    res.value = closed;
    res.sigma_magnitude = discrete.sigma_magnitude;
    res.holonomy_minus = discrete.holonomy_minus;
    res.holonomy_plus = discrete.holonomy_plus;
    res.discrete_vs_closed = std::abs(std::polar(1.0, *discrete.value) -
                                      std::polar(1.0, closed));
    return res;
}

std::vector<Eigen::Vector2cd> parallel_transport_path(
    const std::vector<Eigen::Vector2cd>& frame) {
    std::vector<Eigen::Vector2cd> out;
    out.reserve(frame.size());
    if (frame.empty()) return out;
    out.push_back(frame[0]);
    for (size_t m = 1; m < frame.size(); ++m) {
        const cdouble u = out[m - 1].dot(frame[m]);
        const double mag = std::abs(u);
        if (mag < kLinkOverlapTol)
            throw MeshError("parallel transport hit a vanishing overlap; raise N_k");
        out.push_back(frame[m] * (std::conj(u) / mag));
    }
    return out;
}

}  // namespace topochain

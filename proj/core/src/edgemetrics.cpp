#include "topochain/edgemetrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "topochain/parallel.hpp"

namespace topochain {

std::vector<double> occupations_from_modes(const EigResult& modes, double beta,
                                           double mu) {
    const Eigen::Index N = modes.values.size();
    Eigen::VectorXd f(N);
    for (Eigen::Index n = 0; n < N; ++n)
        f[n] = fermi_weight(modes.values[n], mu, beta);
    const Eigen::VectorXd n_sites = modes.vectors.cwiseAbs2() * f;
    std::vector<double> out(N);
    for (Eigen::Index i = 0; i < N; ++i)
        out[i] = std::clamp(n_sites[i], 0.0, 1.0);  // guards rounding only
    return out;
}

OccupationProfile occupations(const OpenChain& chain, double beta, double mu) {
    OccupationProfile prof;
    prof.beta = beta;
    prof.mu = mu;
    prof.n = occupations_from_modes(eig_hermitian(chain.H), beta, mu);
    return prof;
}

double merit_average_profile(const OpenChain& chain, const std::vector<double>& n) {
    double edge = 0.0, bulk = 0.0;
    for (int i : chain.edge_sites) edge += n[i];
    for (int i : chain.bulk_sites) bulk += n[i];
    edge /= static_cast<double>(chain.edge_sites.size());
    bulk /= static_cast<double>(chain.bulk_sites.size());
    return std::abs(edge - bulk);
}

double merit_min_profile(const OpenChain& chain, const std::vector<double>& n) {
    double best = std::numeric_limits<double>::infinity();
    for (int i : chain.edge_sites)
        for (int j : chain.bulk_sites)
            best = std::min(best, std::abs(n[i] - n[j]));
    return best;
}

double merit_average(const OpenChain& chain, double beta, double mu) {
    return merit_average_profile(chain, occupations(chain, beta, mu).n);
}

double merit_min(const OpenChain& chain, double beta, double mu) {
    return merit_min_profile(chain, occupations(chain, beta, mu).n);
}

double flat_band_oracle(double alpha, double beta, double mu) {
    if (alpha == 1.0) return 0.0;  // intracell dimers only: no free end sites
    if (alpha != -1.0)
        throw ValidationError("flat-band closed form exists only at alpha = -1 or +1");
    const double f0 = fermi_weight(0.0, mu, beta);
    const double fp = fermi_weight(2.0, mu, beta);
    const double fm = fermi_weight(-2.0, mu, beta);
    return f0 - 0.5 * (fp + fm);
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_trial_seed(std::uint64_t root, int trial) {
    return splitmix64(root ^ (0x9E3779B97F4A7C15ull *
                              static_cast<std::uint64_t>(trial + 1)));
}

DisorderStats disorder_robustness(const BlochModel& model, int L, double beta,
                                  double mu, double W, int trials,
                                  std::uint64_t seed, int threads) {
    if (trials < 1) throw ValidationError("disorder study needs trials >= 1");
    if (W < 0.0) throw ValidationError("disorder strength W must be >= 0");

    std::vector<double> avg(trials), mn(trials);
    parallel_for_indexed(trials, threads, [&](int t) {
        const DisorderSpec spec{W, derive_trial_seed(seed, t)};
        const OpenChain chain = build_open_chain(model, L, spec);
        const std::vector<double> n =
            occupations_from_modes(eig_hermitian(chain.H), beta, mu);
        avg[t] = merit_average_profile(chain, n);
        mn[t] = merit_min_profile(chain, n);
    });

    auto stats = [&](const std::vector<double>& v, double& mean, double& sd,
                     double& lo) {
        mean = 0.0;
        for (double x : v) mean += x;
        mean /= trials;
        double ss = 0.0;
        for (double x : v) ss += (x - mean) * (x - mean);
        sd = trials > 1 ? std::sqrt(ss / (trials - 1)) : 0.0;
        lo = *std::min_element(v.begin(), v.end());
    };
    DisorderStats out;
    out.trials = trials;
    stats(avg, out.mean_avg, out.std_avg, out.min_avg);
    stats(mn, out.mean_min, out.std_min, out.min_min);
    return out;
}

}  // namespace topochain

// Acceptance gate: one criterion per invocation (--criterion N), one
// [PASS]/[FAIL] line each, nonzero exit on failure. Tolerances are pinned
// here on purpose; loosening them is a contract change, not a tweak.
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <random>
#include <string>
#include <vector>

#include "topochain/scan.hpp"

using namespace topochain;

namespace {

struct Outcome {
    bool pass = true;
    std::string summary;
    std::vector<std::string> notes;

    void fail(const std::string& note) {
        pass = false;
        notes.push_back(note);
    }
    void note(const std::string& n) { notes.push_back(n); }
};

std::string fmt(const char* pattern, ...) {
    char buf[512];
    va_list args;
    va_start(args, pattern);
    std::vsnprintf(buf, sizeof buf, pattern, args);
    va_end(args);
    return buf;
}

BlochModel model_at(bool ssh, double alpha) {
    return ssh ? ssh_bloch(1.0, alpha) : cl_bloch(1.0, M_PI / 2, 2.0 * (1.0 + alpha));
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1. Integer winding on both sides of the transition, both models, fast.
Outcome criterion_1() {
    Outcome out;
    out.summary = "winding numbers are exact integers across the transition";
    const auto t0 = std::chrono::steady_clock::now();
    const BZGrid grid = make_bz_grid(512);
    for (const bool ssh : {true, false})
        for (double alpha : {-0.9, -0.5, -0.1, 0.1, 0.5, 0.9}) {
            const int expected = alpha < 0 ? 1 : 0;
            const int nu = winding_number(model_at(ssh, alpha), grid);
            if (nu != expected)
                out.fail(fmt("%s alpha=%+.1f: nu=%d, expected %d",
                             ssh ? "ssh" : "cl", alpha, nu, expected));
        }
    const double elapsed = seconds_since(t0);
    out.note(fmt("12 evaluations in %.3f s (budget 1 s)", elapsed));
    if (elapsed >= 1.0) out.fail("runtime budget exceeded");
    return out;
}

// 2. Band phases against the winding parity.
Outcome criterion_2() {
    Outcome out;
    out.summary = "lower-band loop phase matches the winding parity to 1e-6";
    const BZGrid grid = make_bz_grid(512);
    double worst = 0.0;
    for (const bool ssh : {true, false})
        for (double alpha : {-0.9, -0.5, -0.1, 0.1, 0.5, 0.9}) {
            const BerryWindingReport rep =
                check_berry_winding_relation(model_at(ssh, alpha), grid);
            worst = std::max(worst, rep.deviation);
            if (rep.deviation > 1e-6)
                out.fail(fmt("%s alpha=%+.1f: deviation %.3e", ssh ? "ssh" : "cl",
                             alpha, rep.deviation));
        }
    out.note(fmt("worst |e^{i gamma} - e^{i pi nu}| = %.3e", worst));
    return out;
}

// 3. The measure itself: pi / 0 / exact 0 at infinite T / undefined when gapless.
Outcome criterion_3() {
    Outcome out;
    out.summary = "measure hits pi, 0, the exact beta=0 limit, and undefined";
    const BZGrid grid = make_bz_grid(512);
    for (const bool ssh : {true, false}) {
        for (double beta : {0.5, 1.0, 5.0, 50.0}) {
            for (double alpha : {-0.9, -0.5, -0.1}) {
                const PhaseResult res = topological_measure(model_at(ssh, alpha), grid, beta, 0.1);
                if (!res.value || std::abs(*res.value - M_PI) > 1e-6)
                    out.fail(fmt("%s alpha=%+.1f beta=%g: expected pi",
                                 ssh ? "ssh" : "cl", alpha, beta));
            }
            for (double alpha : {0.1, 0.5, 0.9}) {
                const PhaseResult res = topological_measure(model_at(ssh, alpha), grid, beta, 0.1);
                if (!res.value || std::abs(*res.value) > 1e-6)
                    out.fail(fmt("%s alpha=%+.1f beta=%g: expected 0",
                                 ssh ? "ssh" : "cl", alpha, beta));
            }
        }
        for (double alpha : {-0.5, 0.5}) {
            const PhaseResult res = topological_measure(model_at(ssh, alpha), grid, 0.0, 0.1);
            if (!res.value || *res.value != 0.0)
                out.fail(fmt("%s alpha=%+.1f beta=0: expected exact 0", ssh ? "ssh" : "cl", alpha));
        }
        const PhaseResult undef = topological_measure(model_at(ssh, 0.0), grid, 1.0, 0.1);
        if (undef.value || undef.branch != PhaseBranch::GaplessIllDefined)
            out.fail(fmt("%s alpha=0 beta=1: expected undefined", ssh ? "ssh" : "cl"));
    }
    return out;
}

// 4. Discrete Wilson-product phase vs the closed form over a coarse grid.
Outcome criterion_4() {
    Outcome out;
    out.summary = "discrete and closed-form phases agree over the 21x11 grid";
    const auto t0 = std::chrono::steady_clock::now();
    const BZGrid grid = make_bz_grid(512);
    double worst = 0.0;
    int points = 0;
    for (const bool ssh : {true, false})
        for (int ia = 0; ia <= 20; ++ia) {
            const double alpha = -1.0 + 0.1 * ia;
            if (std::abs(alpha) < 0.05) continue;
            for (int ib = 0; ib <= 10; ++ib) {
                if (ib == 0) continue;  // beta = 0 is a separate branch
                const double beta = static_cast<double>(ib);
                const PhaseResult res =
                    topological_measure(model_at(ssh, alpha), grid, beta, 0.1);
                ++points;
                worst = std::max(worst, res.discrete_vs_closed);
                if (!res.value || res.discrete_vs_closed > 1e-6)
                    out.fail(fmt("%s alpha=%+.2f beta=%g: |e^{i g_disc} - e^{i g_closed}| = %.3e",
                                 ssh ? "ssh" : "cl", alpha, beta, res.discrete_vs_closed));
            }
        }
    const double elapsed = seconds_since(t0);
    out.note(fmt("%d grid points, worst deviation %.3e, %.1f s (budget 30 s)",
                 points, worst, elapsed));
    if (elapsed >= 30.0) out.fail("runtime budget exceeded");
    return out;
}

// 5. Dispersionless merit against its closed form and the frozen golden.
Outcome criterion_5() {
    Outcome out;
    out.summary = "dispersionless merit matches the closed form to 1e-10";
    const OpenChain flat = build_open_chain(ssh_bloch(1.0, -1.0), 100);
    for (double beta : {0.5, 1.0, 2.0, 5.0}) {
        const double lambda = merit_average(flat, beta, 0.1);
        const double oracle = flat_band_oracle(-1.0, beta, 0.1);
        if (std::abs(lambda - oracle) > 1e-10)
            out.fail(fmt("beta=%g: chain %.15g vs closed form %.15g", beta, lambda, oracle));
    }
    const double golden = merit_average(flat, 1.0, 0.1);
    out.note(fmt("beta=1 merit %.16g (golden 0.0144733608952475)", golden));
    if (std::abs(golden - 0.0144733608952475) > 1e-12)
        out.fail("beta=1 value drifted from the frozen golden");

    const OpenChain intracell = build_open_chain(ssh_bloch(1.0, 1.0), 100);
    const double trivial = merit_average(intracell, 1.0, 0.1);
    if (trivial > 1e-12 || flat_band_oracle(1.0, 1.0, 0.1) != 0.0)
        out.fail(fmt("alpha=+1 merit %.3e, expected 0", trivial));
    return out;
}

// 6. Region equality between the merit threshold and the phase measure on
// the shipped sweep grids. Known not to hold everywhere; the inventory
// below is the record of where the two regions disagree.
Outcome criterion_6() {
    Outcome out;
    out.summary = "merit >= 1e-2 coincides with gamma = pi on the shipped grids";
    const auto t0 = std::chrono::steady_clock::now();
    for (const char* cfg_name : {"fig1_ssh.cfg", "fig2_cl.cfg"}) {
        ScanConfig config =
            parse_scan_config(std::string(TOPOCHAIN_CONFIG_DIR) + "/" + cfg_name);
        config.csv_path.clear();
        config.svg_path.clear();
        config.json_path.clear();
        config.validate();
        const ScanResult result = run_scan(config);
        for (const bool use_min : {false, true}) {
            int mismatches = 0, considered = 0, printed = 0;
            for (const ScanRow& row : result.rows) {
                // the exclusion is strict, so keep the boundary columns that
                // land at 0.05 minus an ulp on this grid
                if (row.beta < 1.0 || std::abs(row.alpha) < 0.05 - 1e-9) continue;
                ++considered;
                const double lambda = use_min ? row.lambda_min : row.lambda_avg;
                const bool hot_region = lambda >= 1e-2;
                const bool topological =
                    row.gamma && std::abs(*row.gamma - M_PI) <= 1e-6;
                if (hot_region != topological) {
                    ++mismatches;
                    if (printed < 10) {
                        out.note(fmt("mismatch %s %s: alpha=%+.3f beta=%.3f lambda=%.3e gamma_pi=%d",
                                     cfg_name, use_min ? "min" : "avg", row.alpha,
                                     row.beta, lambda, topological ? 1 : 0));
                        ++printed;
                    }
                }
            }
            if (mismatches > printed)
                out.note(fmt("... and %d more %s %s mismatches", mismatches - printed,
                             cfg_name, use_min ? "min" : "avg"));
            out.note(fmt("%s %s: %d mismatches out of %d rows with beta >= 1",
                         cfg_name, use_min ? "min" : "avg", mismatches, considered));
            if (mismatches != 0) out.pass = false;
        }
    }
    const double elapsed = seconds_since(t0);
    out.note(fmt("both sweeps in %.1f s (budget 300 s)", elapsed));
    if (elapsed >= 300.0) out.fail("runtime budget exceeded");
    return out;
}

// 7. Gauge twists must not move the loop phases.
Outcome criterion_7() {
    Outcome out;
    out.summary = "random gauge twists shift the loop phases by < 1e-9";
    const MixedPath path = build_mixed_path(ssh_bloch(1.0, -0.5), make_bz_grid(512), 5.0, 0.1);
    const PhaseResult ref = geometric_phase_discrete(path);
    const double zak_ref = zak_phase(path.bands, -1);
    std::mt19937_64 rng(2026);
    std::uniform_real_distribution<double> u(-M_PI, M_PI);
    double worst_gamma = 0.0, worst_zak = 0.0;
    // phase differences measured on the circle: at the +-pi cut the
    // principal value flips representation under rounding noise
    const auto circle = [](double a, double b) {
        return std::abs(std::exp(cdouble(0, a)) - std::exp(cdouble(0, b)));
    };
    for (int trial = 0; trial < 100; ++trial) {
        MixedPath twisted = path;
        for (auto& v : twisted.bands.v_minus) v *= std::exp(cdouble(0, u(rng)));
        for (auto& v : twisted.bands.v_plus) v *= std::exp(cdouble(0, u(rng)));
        const PhaseResult res = geometric_phase_discrete(twisted);
        worst_gamma = std::max(worst_gamma, circle(*res.value, *ref.value));
        worst_zak = std::max(worst_zak, circle(zak_phase(twisted.bands, -1), zak_ref));
    }
    out.note(fmt("worst phase shift %.3e, worst band-phase shift %.3e", worst_gamma, worst_zak));
    if (worst_gamma > 1e-9) out.fail("weighted phase moved under a gauge twist");
    if (worst_zak > 1e-9) out.fail("band phase moved under a gauge twist");
    return out;
}

// 8. Midgap census on open chains.
Outcome criterion_8() {
    Outcome out;
    out.summary = "topological chain hosts exactly two zero modes, trivial none";
    const auto count_zero = [](double alpha) {
        const EigResult eig = eig_hermitian(build_open_chain(ssh_bloch(1.0, alpha), 100).H);
        int count = 0;
        for (Eigen::Index i = 0; i < eig.values.size(); ++i)
            if (std::abs(eig.values[i]) <= 1e-8) ++count;
        return count;
    };
    const int topo = count_zero(-0.5), triv = count_zero(0.5);
    out.note(fmt("alpha=-0.5: %d midgap states; alpha=+0.5: %d", topo, triv));
    if (topo != 2) out.fail("expected exactly two midgap states at alpha=-0.5");
    if (triv != 0) out.fail("expected no midgap states at alpha=+0.5");
    return out;
}

// 9. The merit survives moderate disorder.
Outcome criterion_9() {
    Outcome out;
    out.summary = "edge merit is stable over 50 disorder realizations";
    const BlochModel model = ssh_bloch(1.0, -0.5);
    const double clean = merit_average(build_open_chain(model, 100), 5.0, 0.1);
    const DisorderStats stats = disorder_robustness(model, 100, 5.0, 0.1, 0.1, 50, 12345);
    out.note(fmt("clean %.6g, ensemble mean %.6g (std %.2g), worst trial %.6g",
                 clean, stats.mean_avg, stats.std_avg, stats.min_avg));
    if (std::abs(stats.mean_avg - clean) > 0.2 * clean)
        out.fail("ensemble mean drifted more than 20% from the clean value");
    if (stats.min_avg <= 1e-2)
        out.fail("a disorder realization dropped below the 1e-2 detection level");
    return out;
}

// 10. The three defining properties of the measure.
Outcome criterion_10() {
    Outcome out;
    out.summary = "measure reduces at T=0, is never created by heating, dies at beta=0";
    const BZGrid grid = make_bz_grid(512);

    // (i) cold limit: e^{i gamma} equals the lower-band phase factor
    for (const bool ssh : {true, false})
        for (double alpha : {-0.5, 0.5}) {
            const BlochModel model = model_at(ssh, alpha);
            const PhaseResult res = topological_measure(model, grid, 50.0, 0.1);
            const double zak = zak_phase(sample_bands(model, grid), -1);
            const double dev = std::abs(std::exp(cdouble(0, *res.value)) - std::exp(cdouble(0, zak)));
            if (dev > 1e-6)
                out.fail(fmt("cold limit %s alpha=%+.1f: |e^{i gamma} - e^{i zak}| = %.3e",
                             ssh ? "ssh" : "cl", alpha, dev));
        }

    // (ii) step shape in temperature: constant pi for every beta > 0, 0 at beta = 0
    for (const bool ssh : {true, false}) {
        const BlochModel model = model_at(ssh, -0.5);
        for (double beta : {50.0, 5.0, 1.0, 0.5, 0.1}) {
            const PhaseResult res = topological_measure(model, grid, beta, 0.1);
            if (!res.value || std::abs(*res.value - M_PI) > 1e-12)
                out.fail(fmt("%s beta=%g: the plateau broke", ssh ? "ssh" : "cl", beta));
        }
        const PhaseResult hot = topological_measure(model, grid, 0.0, 0.1);
        if (!hot.value || *hot.value != 0.0)
            out.fail(fmt("%s beta=0: expected exact 0", ssh ? "ssh" : "cl"));
        // and heating a trivial chain never creates the phase
        for (double beta : {50.0, 1.0, 0.1}) {
            const PhaseResult res = topological_measure(model_at(ssh, 0.5), grid, beta, 0.1);
            if (!res.value || std::abs(*res.value) > 1e-12)
                out.fail(fmt("%s trivial beta=%g: phase appeared from nowhere",
                             ssh ? "ssh" : "cl", beta));
        }
    }

    // (iii) beta = 0 kills the measure for every parameter, gapless included
    for (const bool ssh : {true, false})
        for (double alpha : {-0.9, -0.5, 0.0, 0.5, 0.9}) {
            const PhaseResult res = topological_measure(model_at(ssh, alpha), grid, 0.0, 0.1);
            if (!res.value || *res.value != 0.0 || res.branch != PhaseBranch::InfiniteT)
                out.fail(fmt("beta=0 %s alpha=%+.1f: expected the exact zero branch",
                             ssh ? "ssh" : "cl", alpha));
        }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    int criterion = 0;  // 0 = all
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
            criterion = std::atoi(argv[++i]);
        } else {
            std::fprintf(stderr, "usage: acceptance [--criterion N]  (N in 1..10)\n");
            return 2;
        }
    }
    if (criterion < 0 || criterion > 10) {
        std::fprintf(stderr, "criterion must be in 1..10\n");
        return 2;
    }

    Outcome (*const table[])() = {criterion_1, criterion_2, criterion_3, criterion_4,
                                  criterion_5, criterion_6, criterion_7, criterion_8,
                                  criterion_9, criterion_10};
    bool all_pass = true;
    for (int n = 1; n <= 10; ++n) {
        if (criterion != 0 && criterion != n) continue;
        Outcome out;
        try {
            out = table[n - 1]();
        } catch (const std::exception& e) {
            out.pass = false;
            out.summary = "aborted by exception";
            out.note(e.what());
        }
        std::printf("[%s] criterion %d: %s\n", out.pass ? "PASS" : "FAIL", n,
                    out.summary.c_str());
        for (const std::string& note : out.notes)
            std::printf("  - %s\n", note.c_str());
        all_pass = all_pass && out.pass;
    }
    return all_pass ? 0 : 1;
}

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "topochain/edgemetrics.hpp"
#include "topochain/mixedphase.hpp"

namespace topochain {

// One (alpha, beta) phase-diagram sweep. Grids are uniform; beta = 0 is a
// distinct branch and enters only through include_zero (beta_min must stay
// positive). Model parameters besides the swept alpha sit at the named
// defaults (SSH: J; CL: K, theta), with CL taking M = 2K (1 + alpha).
struct ScanConfig {
    ModelKind model = ModelKind::SSH;
    double J = 1.0;
    double K = 1.0;
    double theta = M_PI / 2;

    double alpha_min = -1.0, alpha_max = 1.0;
    int alpha_count = 81;
    double beta_min = 0.2, beta_max = 10.0;
    int beta_count = 50;
    bool include_zero = true;

    double mu = 0.1;
    int N_k = kDefaultNk;
    int L = 100;

    double W = 0.0;
    int trials = 1;
    std::uint64_t seed = 0;

    std::string csv_path, svg_path, json_path;  // empty = skip that artifact
    bool svg_use_min = false;                   // heatmap column: avg or min merit

    std::vector<double> alpha_values() const;
    std::vector<double> beta_values() const;  // 0 first when include_zero
    void validate() const;                    // ConfigError on bad ranges
};

struct ScanRow {
    double alpha = 0.0, beta = 0.0;
    std::optional<int> nu;        // nullopt = undefined (gapless)
    std::optional<double> gamma;  // nullopt = undefined (gapless at beta > 0)
    PhaseBranch branch = PhaseBranch::FiniteTGapped;
    double lambda_avg = 0.0, lambda_min = 0.0;
    double gap = 0.0;
};

struct ScanResult {
    ScanConfig config;
    std::vector<ScanRow> rows;  // alpha-major, beta-minor, grid order
};

// Worker pool over alpha columns (bands, winding, and the open-chain
// eigenbasis are beta-independent and computed once per column); rows are
// written into preassigned slots so the output is order-stable and
// independent of the thread count. threads = 0 picks the hardware count.
// With W > 0 the merit columns hold per-point trial means.
ScanResult run_scan(const ScanConfig& config, int threads = 0);

// Artifact emission. CSV header:
//   alpha,beta,nu,gamma,branch,lambda_avg,lambda_min,gap
// with "undefined" spelled out, never 0. The JSON provenance block is
// deterministic except the single "volatile" subobject (timings). The SVG is
// a self-contained heatmap, diverging scale centered on the 1e-2 level.
std::string scan_to_csv(const ScanResult& result);
std::string scan_to_json(const ScanResult& result, double elapsed_seconds);
std::string scan_to_svg(const ScanResult& result, bool use_min = false);

// Runs run_scan and writes whichever of csv/svg/json paths are set.
// ConfigError on unwritable paths.
ScanResult run_scan_with_outputs(const ScanConfig& config, int threads = 0);

// Reads a "key = value" config file ('#' starts a comment). Keys: model,
// J, K, theta, alpha_min/max/count, beta_min/max/count, include_zero, mu,
// N_k, L, W, trials, seed, out_csv, out_svg, out_json, svg_use_min.
// Unknown keys and malformed values raise ConfigError; omitted keys keep
// the ScanConfig defaults. Does not call validate().
ScanConfig parse_scan_config(const std::string& path);

}  // namespace topochain

#include "topochain/scan.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "topochain/errors.hpp"
#include "topochain/parallel.hpp"
#include "topochain/version.hpp"

namespace topochain {

namespace {

std::vector<double> linspace(double lo, double hi, int count) {
    std::vector<double> v(static_cast<std::size_t>(count));
    if (count == 1) {
        v[0] = lo;
        return v;
    }
    const double step = (hi - lo) / (count - 1);
    for (int i = 0; i < count; ++i) v[static_cast<std::size_t>(i)] = lo + step * i;
    v.back() = hi;
    return v;
}

BlochModel model_at(const ScanConfig& c, double alpha) {
    if (c.model == ModelKind::SSH) return ssh_bloch(c.J, alpha);
    return cl_bloch(c.K, c.theta, 2.0 * c.K * (1.0 + alpha));
}

void append_g12(std::string& out, double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    out += buf;
}

}  // namespace

std::vector<double> ScanConfig::alpha_values() const {
    return linspace(alpha_min, alpha_max, alpha_count);
}

std::vector<double> ScanConfig::beta_values() const {
    std::vector<double> v;
    v.reserve(static_cast<std::size_t>(beta_count) + (include_zero ? 1 : 0));
    if (include_zero) v.push_back(0.0);
    for (double b : linspace(beta_min, beta_max, beta_count)) v.push_back(b);
    return v;
}

void ScanConfig::validate() const {
    auto bad = [](const std::string& msg) { throw ConfigError(msg); };
    if (alpha_count < 1) bad("alpha count must be >= 1");
    if (beta_count < 1) bad("beta count must be >= 1");
    for (double x : {J, K, theta, alpha_min, alpha_max, beta_min, beta_max, mu, W})
        if (!std::isfinite(x)) bad("config contains a non-finite number");
    if (alpha_min > alpha_max) bad("alpha range is empty (min > max)");
    if (beta_min > beta_max) bad("beta range is empty (min > max)");
    // beta = 0 is its own branch, reachable only through include_zero.
    if (beta_min <= 0.0) bad("beta_min must be > 0; use include_zero for beta = 0");
    if (N_k < 16) bad("N_k must be >= 16");
    if (L < 4) bad("L must be >= 4");
    if (W < 0.0) bad("disorder strength W must be >= 0");
    if (trials < 1) bad("trials must be >= 1");
    // The sweep endpoints must yield constructible models; anything between
    // follows because the model constraints are interval conditions in alpha.
    try {
        (void)model_at(*this, alpha_min);
        (void)model_at(*this, alpha_max);
    } catch (const ValidationError& e) {
        bad(std::string("alpha range leaves the model's domain: ") + e.what());
    }
}

ScanResult run_scan(const ScanConfig& config, int threads) {
    config.validate();
    const std::vector<double> alphas = config.alpha_values();
    const std::vector<double> betas = config.beta_values();
    const std::size_t n_beta = betas.size();

    ScanResult result;
    result.config = config;
    result.rows.resize(alphas.size() * n_beta);

    const BZGrid grid = make_bz_grid(config.N_k);

    parallel_for_indexed(alphas.size(), threads, [&](std::size_t ai) {
        const BlochModel model = model_at(config, alphas[ai]);
        const BandData bands = sample_bands(model, grid);

        std::optional<int> nu;
        if (bands.gapped()) {
            try {
                nu = winding_number(model, grid);
            } catch (const GaplessError&) {
                // gap barely above tolerance but |d| dips below it: treat
                // the point as gapless for the topological columns
            }
        }

        // The chain spectrum is beta-independent: diagonalize once per
        // realization, then sweep beta through the occupations only.
        OpenChain layout;
        std::vector<EigResult> trial_modes;
        if (config.W > 0.0) {
            const std::uint64_t column_root =
                derive_trial_seed(config.seed, static_cast<int>(ai));
            trial_modes.reserve(static_cast<std::size_t>(config.trials));
            for (int t = 0; t < config.trials; ++t) {
                OpenChain chain = build_open_chain(
                    model, config.L,
                    DisorderSpec{config.W, derive_trial_seed(column_root, t)});
                trial_modes.push_back(eig_hermitian(chain.H));
                if (t == 0) layout = std::move(chain);
            }
        } else {
            layout = build_open_chain(model, config.L);
            trial_modes.push_back(eig_hermitian(layout.H));
        }

        for (std::size_t bi = 0; bi < n_beta; ++bi) {
            const double beta = betas[bi];
            ScanRow row;
            row.alpha = alphas[ai];
            row.beta = beta;
            row.nu = nu;
            row.gap = bands.gap;

            double acc_avg = 0.0, acc_min = 0.0;
            for (const EigResult& modes : trial_modes) {
                const std::vector<double> n =
                    occupations_from_modes(modes, beta, config.mu);
                acc_avg += merit_average_profile(layout, n);
                acc_min += merit_min_profile(layout, n);
            }
            row.lambda_avg = acc_avg / static_cast<double>(trial_modes.size());
            row.lambda_min = acc_min / static_cast<double>(trial_modes.size());

            if (beta == 0.0) {
                row.gamma = 0.0;
                row.branch = PhaseBranch::InfiniteT;
            } else if (!nu) {
                row.branch = PhaseBranch::GaplessIllDefined;
            } else {
                row.gamma = (*nu % 2 == 0) ? 0.0 : M_PI;
                row.branch = PhaseBranch::FiniteTGapped;
            }
            result.rows[ai * n_beta + bi] = std::move(row);
        }
    });

    return result;
}

std::string scan_to_csv(const ScanResult& result) {
    std::string out = "alpha,beta,nu,gamma,branch,lambda_avg,lambda_min,gap\n";
    out.reserve(out.size() + 96 * result.rows.size());
    char buf[32];
    for (const ScanRow& r : result.rows) {
        append_g12(out, r.alpha);
        out += ',';
        append_g12(out, r.beta);
        out += ',';
        if (r.nu) {
            std::snprintf(buf, sizeof buf, "%d", *r.nu);
            out += buf;
        } else {
            out += "undefined";
        }
        out += ',';
        if (r.gamma) {
            append_g12(out, *r.gamma);
        } else {
            out += "undefined";
        }
        out += ',';
        out += to_string(r.branch);
        out += ',';
        append_g12(out, r.lambda_avg);
        out += ',';
        append_g12(out, r.lambda_min);
        out += ',';
        append_g12(out, r.gap);
        out += '\n';
    }
    return out;
}

std::string scan_to_json(const ScanResult& result, double elapsed_seconds) {
    using json = nlohmann::ordered_json;
    const ScanConfig& c = result.config;

    json j;
    j["generator"] = "topochain";
    j["version"] = version();

    json jc;
    jc["model"] = c.model == ModelKind::SSH ? "ssh" : "cl";
    jc["J"] = c.J;
    jc["K"] = c.K;
    jc["theta"] = c.theta;
    jc["alpha"] = {{"min", c.alpha_min}, {"max", c.alpha_max}, {"count", c.alpha_count}};
    jc["beta"] = {{"min", c.beta_min},
                  {"max", c.beta_max},
                  {"count", c.beta_count},
                  {"include_zero", c.include_zero}};
    jc["mu"] = c.mu;
    jc["N_k"] = c.N_k;
    jc["L"] = c.L;
    jc["disorder"] = {{"W", c.W}, {"trials", c.trials}, {"seed", c.seed}};
    jc["outputs"] = {{"csv", c.csv_path},
                     {"svg", c.svg_path},
                     {"json", c.json_path},
                     {"svg_use_min", c.svg_use_min}};
    j["config"] = jc;

    const std::size_t n_beta = result.config.beta_values().size();
    j["grid"] = {{"alpha_points", c.alpha_count},
                 {"beta_points", n_beta},
                 {"rows", result.rows.size()}};

    std::size_t undefined_gamma = 0, gamma_pi = 0;
    double avg_max = 0.0, min_max = 0.0;
    for (const ScanRow& r : result.rows) {
        if (!r.gamma) {
            ++undefined_gamma;
        } else if (std::abs(*r.gamma) > 1.0) {
            ++gamma_pi;
        }
        avg_max = std::max(avg_max, r.lambda_avg);
        min_max = std::max(min_max, r.lambda_min);
    }
    j["summary"] = {{"undefined_gamma_rows", undefined_gamma},
                    {"gamma_pi_rows", gamma_pi},
                    {"lambda_avg_max", avg_max},
                    {"lambda_min_max", min_max}};

    // Everything above is reproducible; timings are quarantined here so a
    // golden comparison can drop this one subobject.
    j["volatile"] = {{"elapsed_seconds", elapsed_seconds}};

    return j.dump(2) + "\n";
}

namespace {

// Diverging blue -> white -> red on log10(Lambda), white pinned at the 1e-2
// level, saturating at 1e-4 (blue #2166ac) and 1 (red #b2182b).
void merit_color(double lambda, int rgb[3]) {
    if (!std::isfinite(lambda)) lambda = 0.0;
    const double lv = std::log10(std::clamp(lambda, 1e-6, 1.0));
    const double t = std::clamp((lv + 2.0) / 2.0, -1.0, 1.0);
    const auto lerp = [](int a, int b, double u) {
        return static_cast<int>(std::lround(a + (b - a) * u));
    };
    if (t < 0.0) {
        rgb[0] = lerp(255, 33, -t);
        rgb[1] = lerp(255, 102, -t);
        rgb[2] = lerp(255, 172, -t);
    } else {
        rgb[0] = lerp(255, 178, t);
        rgb[1] = lerp(255, 24, t);
        rgb[2] = lerp(255, 43, t);
    }
}

void svg_rect(std::string& out, double x, double y, double w, double h,
              const int rgb[3]) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" "
                  "fill=\"#%02x%02x%02x\"/>\n",
                  x, y, w, h, rgb[0], rgb[1], rgb[2]);
    out += buf;
}

void svg_text(std::string& out, double x, double y, const std::string& s,
              const char* anchor, int size) {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.2f\" y=\"%.2f\" font-family=\"sans-serif\" "
                  "font-size=\"%d\" text-anchor=\"%s\" fill=\"#222222\">%s</text>\n",
                  x, y, size, anchor, s.c_str());
    out += buf;
}

std::string short_num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.4g", x);
    return buf;
}

}  // namespace

std::string scan_to_svg(const ScanResult& result, bool use_min) {
    const std::vector<double> alphas = result.config.alpha_values();
    const std::vector<double> betas = result.config.beta_values();
    const std::size_t n_alpha = alphas.size();
    const std::size_t n_beta = betas.size();

    // Fixed canvas; cells stretch to fill. Alpha runs rightward, beta upward
    // (cells ordered by grid index; the beta = 0 row, when present, sits at
    // the bottom). Colorbar on the right.
    const double plot_w = 640.0, plot_h = 480.0;
    const double ml = 80.0, mt = 50.0, mb = 60.0;
    const double bar_gap = 30.0, bar_w = 20.0, bar_labels = 70.0;
    const double width = ml + plot_w + bar_gap + bar_w + bar_labels;
    const double height = mt + plot_h + mb;
    const double cell_w = plot_w / static_cast<double>(n_alpha);
    const double cell_h = plot_h / static_cast<double>(n_beta);

    std::string out;
    out.reserve(200 * result.rows.size() / 2 + 4096);
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" "
                  "height=\"%.0f\" viewBox=\"0 0 %.0f %.0f\">\n",
                  width, height, width, height);
    out += buf;
    const int white[3] = {255, 255, 255};
    svg_rect(out, 0, 0, width, height, white);

    for (std::size_t ai = 0; ai < n_alpha; ++ai) {
        for (std::size_t bi = 0; bi < n_beta; ++bi) {
            const ScanRow& r = result.rows[ai * n_beta + bi];
            int rgb[3];
            merit_color(use_min ? r.lambda_min : r.lambda_avg, rgb);
            const double x = ml + cell_w * static_cast<double>(ai);
            const double y = mt + cell_h * static_cast<double>(n_beta - 1 - bi);
            svg_rect(out, x, y, cell_w + 0.5, cell_h + 0.5, rgb);
        }
    }

    // Frame and axis labels.
    std::snprintf(buf, sizeof buf,
                  "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" "
                  "fill=\"none\" stroke=\"#222222\"/>\n",
                  ml, mt, plot_w, plot_h);
    out += buf;

    const char* metric = use_min ? "lambda_min" : "lambda_avg";
    const char* model = result.config.model == ModelKind::SSH ? "ssh" : "cl";
    std::snprintf(buf, sizeof buf, "%s heatmap, model %s, L=%d, mu=%.4g, N_k=%d",
                  metric, model, result.config.L, result.config.mu,
                  result.config.N_k);
    svg_text(out, ml + plot_w / 2, mt - 18, buf, "middle", 16);

    svg_text(out, ml + plot_w / 2, height - 14, "alpha", "middle", 14);
    svg_text(out, 22, mt + plot_h / 2, "beta", "middle", 14);

    // Alpha ticks: ends and midpoint, centered on their cells.
    const std::size_t a_ticks[3] = {0, (n_alpha - 1) / 2, n_alpha - 1};
    for (std::size_t i = 0; i < 3; ++i) {
        const std::size_t ai = a_ticks[i];
        if (i > 0 && ai == a_ticks[i - 1]) continue;
        const double x = ml + cell_w * (static_cast<double>(ai) + 0.5);
        svg_text(out, x, mt + plot_h + 22, short_num(alphas[ai]), "middle", 12);
    }
    // Beta ticks: bottom cell, top cell, and beta = 0 if it is its own row.
    {
        const double y_bot = mt + cell_h * (static_cast<double>(n_beta) - 0.5) + 4;
        const double y_top = mt + cell_h * 0.5 + 4;
        svg_text(out, ml - 8, y_bot, short_num(betas.front()), "end", 12);
        if (n_beta > 1)
            svg_text(out, ml - 8, y_top, short_num(betas.back()), "end", 12);
    }

    // Colorbar: 120 bands from t = -1 (bottom) to +1 (top).
    const double bx = ml + plot_w + bar_gap;
    const int bands = 120;
    for (int i = 0; i < bands; ++i) {
        const double t = -1.0 + 2.0 * (i + 0.5) / bands;
        const double lambda = std::pow(10.0, 2.0 * t - 2.0);
        int rgb[3];
        merit_color(lambda, rgb);
        const double y = mt + plot_h * (1.0 - static_cast<double>(i + 1) / bands);
        svg_rect(out, bx, y, bar_w, plot_h / bands + 0.5, rgb);
    }
    std::snprintf(buf, sizeof buf,
                  "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" "
                  "fill=\"none\" stroke=\"#222222\"/>\n",
                  bx, mt, bar_w, plot_h);
    out += buf;
    const char* bar_ticks[5] = {"1e-4", "1e-3", "1e-2", "1e-1", "1"};
    for (int i = 0; i < 5; ++i) {
        const double frac = static_cast<double>(i) / 4.0;  // t = -1 .. +1
        const double y = mt + plot_h * (1.0 - frac) + 4;
        svg_text(out, bx + bar_w + 6, y, bar_ticks[i], "start", 12);
    }
    svg_text(out, bx + bar_w / 2, mt - 8, metric, "middle", 12);

    out += "</svg>\n";
    return out;
}

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

[[noreturn]] void bad_line(int line, const std::string& msg) {
    throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

double to_double(const std::string& v, const std::string& key, int line) {
    std::size_t used = 0;
    double x = 0.0;
    try {
        x = std::stod(v, &used);
    } catch (const std::exception&) {
        used = std::string::npos;
    }
    if (used != v.size())
        bad_line(line, "key '" + key + "' needs a number, got '" + v + "'");
    return x;
}

int to_int(const std::string& v, const std::string& key, int line) {
    const double x = to_double(v, key, line);
    const int i = static_cast<int>(x);
    if (static_cast<double>(i) != x)
        bad_line(line, "key '" + key + "' needs an integer, got '" + v + "'");
    return i;
}

bool to_bool(const std::string& v, const std::string& key, int line) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    bad_line(line, "key '" + key + "' needs true/false, got '" + v + "'");
}

std::uint64_t to_seed(const std::string& v, const std::string& key, int line) {
    std::size_t used = 0;
    std::uint64_t x = 0;
    try {
        x = std::stoull(v, &used);
    } catch (const std::exception&) {
        used = std::string::npos;
    }
    if (used != v.size())
        bad_line(line, "key '" + key + "' needs an unsigned integer, got '" + v + "'");
    return x;
}

}  // namespace

ScanConfig parse_scan_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config: " + path);
    ScanConfig c;
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            bad_line(lineno, "expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty()) bad_line(lineno, "empty key or value");

        if (key == "model") {
            if (val == "ssh") c.model = ModelKind::SSH;
            else if (val == "cl") c.model = ModelKind::CL;
            else bad_line(lineno, "model must be ssh or cl");
        } else if (key == "J") c.J = to_double(val, key, lineno);
        else if (key == "K") c.K = to_double(val, key, lineno);
        else if (key == "theta") c.theta = to_double(val, key, lineno);
        else if (key == "alpha_min") c.alpha_min = to_double(val, key, lineno);
        else if (key == "alpha_max") c.alpha_max = to_double(val, key, lineno);
        else if (key == "alpha_count") c.alpha_count = to_int(val, key, lineno);
        else if (key == "beta_min") c.beta_min = to_double(val, key, lineno);
        else if (key == "beta_max") c.beta_max = to_double(val, key, lineno);
        else if (key == "beta_count") c.beta_count = to_int(val, key, lineno);
        else if (key == "include_zero") c.include_zero = to_bool(val, key, lineno);
        else if (key == "mu") c.mu = to_double(val, key, lineno);
        else if (key == "N_k") c.N_k = to_int(val, key, lineno);
        else if (key == "L") c.L = to_int(val, key, lineno);
        else if (key == "W") c.W = to_double(val, key, lineno);
        else if (key == "trials") c.trials = to_int(val, key, lineno);
        else if (key == "seed") c.seed = to_seed(val, key, lineno);
        else if (key == "out_csv") c.csv_path = val;
        else if (key == "out_svg") c.svg_path = val;
        else if (key == "out_json") c.json_path = val;
        else if (key == "svg_use_min") c.svg_use_min = to_bool(val, key, lineno);
        else bad_line(lineno, "unknown key '" + key + "'");
    }
    return c;
}

ScanResult run_scan_with_outputs(const ScanConfig& config, int threads) {
    const auto t0 = std::chrono::steady_clock::now();
    ScanResult result = run_scan(config, threads);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();

    const auto write_file = [](const std::string& path, const std::string& body) {
        const std::filesystem::path parent = std::filesystem::path(path).parent_path();
        if (!parent.empty()) {
            std::error_code ec;
            std::filesystem::create_directories(parent, ec);
            if (ec)
                throw ConfigError("cannot create directory " + parent.string() + ": " +
                                  ec.message());
        }
        std::ofstream out(path, std::ios::binary);
        if (!out) throw ConfigError("cannot open for writing: " + path);
        out << body;
        out.flush();
        if (!out) throw ConfigError("write failed: " + path);
    };
    if (!config.csv_path.empty()) write_file(config.csv_path, scan_to_csv(result));
    if (!config.svg_path.empty())
        write_file(config.svg_path, scan_to_svg(result, config.svg_use_min));
    if (!config.json_path.empty())
        write_file(config.json_path, scan_to_json(result, elapsed));
    return result;
}

}  // namespace topochain

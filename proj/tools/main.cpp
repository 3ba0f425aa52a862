// frkit: command-line front end for Fourier-ratio analysis of time series.
//
// Subcommands: analyze, approx, impute, constants, noise. Every report embeds
// the resolved configuration, the seed, and the artifact version; with a
// fixed seed the outputs are byte-identical across runs (disable the
// timestamp with --no-timestamp for fully reproducible files).
//
// Exit codes: 0 success, 1 usage, 2 input, 3 numerical.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "frkit/approx.hpp"
#include "frkit/constants.hpp"
#include "frkit/fourier_ratio.hpp"
#include "frkit/noise.hpp"
#include "frkit/recover.hpp"
#include "frkit/report.hpp"
#include "frkit/series_io.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

using nlohmann::ordered_json;

struct GlobalOpts {
    std::uint64_t seed = 1;
    std::string format = "json";
    bool no_timestamp = false;
    std::string outdir;
};

std::string resolve_outdir(const GlobalOpts& g) {
    if (!g.outdir.empty()) return g.outdir;
    if (const char* env = std::getenv("FRKIT_OUT_DIR")) return env;
    return ".";
}

std::string out_path(const GlobalOpts& g, const std::string& name) {
    return (std::filesystem::path(resolve_outdir(g)) / name).string();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw frkit::InputError("cannot write output file: " + path);
    out << content;
}

void emit_report(const GlobalOpts& g, const ordered_json& j, const std::string& save_path) {
    std::string text;
    if (g.format == "csv") {
        // flat key,value rows for scripting; nested objects use dotted paths
        std::string rows = "key,value\n";
        const std::function<void(const ordered_json&, const std::string&)> walk =
            [&](const ordered_json& node, const std::string& prefix) {
                for (auto it = node.begin(); it != node.end(); ++it) {
                    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
                    if (it->is_object())
                        walk(*it, key);
                    else if (it->is_number_float())
                        rows += key + "," + frkit::fmt9(it->get<double>()) + "\n";
                    else
                        rows += key + "," + it->dump() + "\n";
                }
            };
        walk(j, "");
        text = rows;
    } else {
        text = j.dump(2) + "\n";
    }
    std::cout << text;
    if (!save_path.empty()) write_file(save_path, text);
}

frkit::Detrend parse_detrend(const std::string& s) {
    if (s == "none") return frkit::Detrend::None;
    if (s == "mean") return frkit::Detrend::Mean;
    if (s == "linear") return frkit::Detrend::Linear;
    throw CLI::ValidationError("--detrend must be none, mean, or linear");
}

struct SeriesArgs {
    std::string input;
    std::string column;
    std::string imag_column;
    bool header = false;
    bool no_header = false;
    std::string detrend = "none";
};

void add_series_options(CLI::App* sub, SeriesArgs& s) {
    sub->add_option("input", s.input, "input CSV file")->required();
    sub->add_option("--column", s.column, "value column (name or 0-based index)");
    sub->add_option("--imag-column", s.imag_column, "imaginary-part column");
    sub->add_flag("--header", s.header, "force header row");
    sub->add_flag("--no-header", s.no_header, "force no header row");
    sub->add_option("--detrend", s.detrend, "preprocessing: none|mean|linear")
        ->default_val("none");
}

frkit::Signal load_signal(const SeriesArgs& s, ordered_json* config) {
    frkit::SeriesOptions opts;
    opts.column = s.column;
    opts.imag_column = s.imag_column;
    if (s.header) opts.has_header = true;
    if (s.no_header) opts.has_header = false;
    const auto parsed = frkit::read_series(s.input, opts);
    if (parsed.missing_count > 0)
        throw frkit::InputError("series contains " + std::to_string(parsed.missing_count) +
                                " missing values; use the impute subcommand");
    if (config) {
        (*config)["input"] = s.input;
        (*config)["column"] = s.column.empty() ? "auto" : s.column;
        (*config)["detrend"] = s.detrend;
        (*config)["length"] = parsed.values.size();
    }
    return frkit::detrend_signal(frkit::Signal(parsed.values), parse_detrend(s.detrend));
}

// ---- analyze ---------------------------------------------------------------

int cmd_analyze(const GlobalOpts& g, const SeriesArgs& s, double large_spectrum_eta,
                const std::string& save) {
    ordered_json j = frkit::report_envelope("analyze", g.seed, !g.no_timestamp);
    ordered_json config;
    const frkit::Signal f = load_signal(s, &config);
    j["config"] = config;

    const auto rep = frkit::analyze(f);
    ordered_json r;
    r["fr"] = frkit::round9(rep.fr);
    r["fr_hat"] = frkit::round9(rep.fr_hat);
    r["bi_fr"] = frkit::round9(rep.bi_fr);
    r["coherence"] = frkit::round9(rep.coherence);
    r["numerical_sparsity"] = frkit::round9(rep.numerical_sparsity);
    r["l1_spectral_norm"] = frkit::round9(rep.l1_spectral_norm);
    r["l2_norm"] = frkit::round9(rep.l2_norm);
    r["fr_range_max"] = frkit::round9(std::sqrt(static_cast<double>(rep.domain_size)));
    r["domain_size"] = rep.domain_size;
    if (large_spectrum_eta > 0.0) {
        const auto gamma = frkit::large_spectrum(f, large_spectrum_eta);
        r["large_spectrum_eta"] = frkit::round9(large_spectrum_eta);
        r["large_spectrum"] = gamma.members();
    }
    j["result"] = r;
    emit_report(g, j, save);
    return 0;
}

// ---- approx ----------------------------------------------------------------

int cmd_approx(const GlobalOpts& g, const SeriesArgs& s, const std::string& mode, double eta,
               int max_attempts, const std::string& recon_out, const std::string& save) {
    ordered_json j = frkit::report_envelope("approx", g.seed, !g.no_timestamp);
    ordered_json config;
    const frkit::Signal f = load_signal(s, &config);
    config["mode"] = mode;
    config["eta"] = frkit::round9(eta);
    config["max_attempts"] = max_attempts;
    j["config"] = config;

    frkit::TrigPoly poly;
    ordered_json r;
    bool failed = false;
    if (mode == "truncate") {
        const auto res = frkit::spectral_truncation(f, eta);
        poly = res.poly;
        r["degree"] = poly.degree();
        r["achieved_error"] = frkit::round9(res.error);
        r["target_error"] = frkit::round9(res.target);
        r["success"] = true;
    } else {
        frkit::TrigApproxResult res;
        if (mode == "l2")
            res = frkit::approx_l2(f, eta, g.seed, max_attempts);
        else if (mode == "linf")
            res = frkit::approx_linf(f, eta, g.seed, max_attempts);
        else if (mode == "l1")
            res = frkit::approx_l1(f, eta, g.seed, max_attempts);
        else
            throw CLI::ValidationError("--mode must be l2, linf, l1, or truncate");
        poly = res.poly.canonicalized();
        r["degree"] = res.k;
        r["distinct_frequencies"] = poly.degree();
        r["achieved_error"] = frkit::round9(res.achieved);
        r["target_error"] = frkit::round9(res.target);
        r["attempts"] = res.attempts;
        r["success"] = res.success;
        failed = !res.success;
    }

    const frkit::Signal recon = frkit::eval(poly);
    std::string csv = "index,original_re,original_im,recon_re,recon_im,residual_abs\n";
    for (std::size_t x = 0; x < f.size(); ++x) {
        csv += std::to_string(x) + "," + frkit::fmt9(f[x].real()) + "," +
               frkit::fmt9(f[x].imag()) + "," + frkit::fmt9(recon[x].real()) + "," +
               frkit::fmt9(recon[x].imag()) + "," + frkit::fmt9(std::abs(f[x] - recon[x])) + "\n";
    }
    const std::string recon_path =
        recon_out.empty() ? out_path(g, "approx_reconstruction.csv") : recon_out;
    write_file(recon_path, csv);
    r["reconstruction_csv"] = recon_path;
    j["result"] = r;
    emit_report(g, j, save);
    if (failed) {
        std::cerr << "approx: no attempt met the target error\n";
        return kExitNumerical;
    }
    return 0;
}

// ---- impute ----------------------------------------------------------------

// q-sweep phase transition: the recovery guarantee's sample count carries an
// unspecified universal constant, so the empirical transition is reported
// instead of asserting a formula. Requires a fully observed input as ground
// truth; for each q it draws `trials` uniform-q masks and imputes.
int cmd_impute_sweep(const GlobalOpts& g, const frkit::Signal& truth,
                     const std::vector<std::size_t>& q_values, std::size_t trials, double eta,
                     const frkit::SolverConfig& cfg, ordered_json j, const std::string& save) {
    const std::size_t n = truth.size();
    const double truth_l2 = frkit::lp_norm(truth, 2.0);
    std::string csv = "q,mean_mask_size,recovered_rate,mean_rel_error,median_rel_error\n";
    ordered_json rows = ordered_json::array();
    for (std::size_t qi = 0; qi < q_values.size(); ++qi) {
        const std::size_t q = q_values[qi];
        double mask_sum = 0.0;
        std::size_t recovered = 0;
        std::vector<double> errs;
        for (std::size_t t = 0; t < trials; ++t) {
            const auto mask =
                frkit::sample_uniform(n, q, frkit::mix_seed(g.seed, qi, t));
            const auto res = frkit::impute(frkit::apply_mask(truth, mask.indices), mask, eta, cfg);
            double err = 0.0;
            for (std::size_t x = 0; x < n; ++x) err += std::norm(res.x_star[x] - truth[x]);
            const double rel = std::sqrt(err) / truth_l2;
            errs.push_back(rel);
            mask_sum += static_cast<double>(mask.indices.size());
            if (rel <= 1e-6) ++recovered;
        }
        std::sort(errs.begin(), errs.end());
        const double median = trials % 2 ? errs[trials / 2]
                                         : 0.5 * (errs[trials / 2 - 1] + errs[trials / 2]);
        double mean = 0.0;
        for (double e : errs) mean += e;
        mean /= static_cast<double>(trials);
        const double rate = static_cast<double>(recovered) / static_cast<double>(trials);
        csv += std::to_string(q) + "," + frkit::fmt9(mask_sum / static_cast<double>(trials)) +
               "," + frkit::fmt9(rate) + "," + frkit::fmt9(mean) + "," + frkit::fmt9(median) +
               "\n";
        ordered_json row;
        row["q"] = q;
        row["recovered_rate"] = frkit::round9(rate);
        row["mean_rel_error"] = frkit::round9(mean);
        row["median_rel_error"] = frkit::round9(median);
        rows.push_back(row);
    }
    const std::string sweep_path = out_path(g, "impute_sweep.csv");
    write_file(sweep_path, csv);
    ordered_json r;
    r["sweep_csv"] = sweep_path;
    r["trials_per_q"] = trials;
    r["rows"] = rows;
    j["result"] = r;
    emit_report(g, j, save);
    return 0;
}

int cmd_impute(const GlobalOpts& g, const SeriesArgs& s, double eta, double solver_tol,
               std::size_t max_iters, double p_override, const std::vector<std::size_t>& sweep_q,
               std::size_t sweep_trials, const std::string& imputed_out,
               const std::string& save) {
    ordered_json j = frkit::report_envelope("impute", g.seed, !g.no_timestamp);

    // structured (index,value_re,value_im,observed) files are auto-detected
    frkit::ParsedSeries parsed;
    {
        const auto lines = frkit::detail::read_lines(s.input);
        const auto head = frkit::detail::split_csv_line(lines[0]);
        const bool indexed = std::find(head.begin(), head.end(), "value_re") != head.end() &&
                             std::find(head.begin(), head.end(), "observed") != head.end();
        if (indexed) {
            parsed = frkit::read_indexed_series(s.input);
        } else {
            frkit::SeriesOptions opts;
            opts.column = s.column;
            opts.imag_column = s.imag_column;
            if (s.header) opts.has_header = true;
            if (s.no_header) opts.has_header = false;
            parsed = frkit::read_series(s.input, opts);
        }
    }
    const std::size_t n = parsed.values.size();
    std::vector<std::uint32_t> obs_idx;
    for (std::size_t x = 0; x < n; ++x)
        if (parsed.observed[x]) obs_idx.push_back(static_cast<std::uint32_t>(x));
    if (obs_idx.empty()) throw frkit::InputError("impute: every value is missing");

    if (!sweep_q.empty()) {
        if (obs_idx.size() != n)
            throw frkit::InputError("impute --sweep-q needs a fully observed input as truth");
        ordered_json config;
        config["input"] = s.input;
        config["length"] = n;
        config["sweep_q"] = sweep_q;
        config["trials"] = sweep_trials;
        config["eta"] = frkit::round9(eta);
        j["config"] = config;
        frkit::SolverConfig cfg;
        cfg.tol = solver_tol;
        cfg.max_iters = max_iters;
        return cmd_impute_sweep(g, frkit::Signal(parsed.values), sweep_q, sweep_trials, eta, cfg,
                                std::move(j), save);
    }

    ordered_json config;
    config["input"] = s.input;
    config["length"] = n;
    config["observed"] = obs_idx.size();
    config["missing"] = n - obs_idx.size();
    config["eta"] = frkit::round9(eta);
    config["solver_tol"] = frkit::round9(solver_tol);
    config["max_iters"] = max_iters;
    j["config"] = config;

    frkit::SampleMask mask;
    mask.indices = frkit::IndexSet(obs_idx, n);
    const frkit::Signal observed(parsed.values);

    frkit::ImputationResult res;
    if (obs_idx.size() == n && eta == 0.0) {
        res.x_star = observed;
        res.objective = frkit::lp_norm(frkit::dft(observed), 1.0);
        res.converged = true;
    } else {
        frkit::SolverConfig cfg;
        cfg.tol = solver_tol;
        cfg.max_iters = max_iters;
        res = frkit::impute(observed, mask, eta, cfg);
    }

    std::string csv = "index,imputed_re,imputed_im,was_observed\n";
    for (std::size_t x = 0; x < n; ++x) {
        csv += std::to_string(x) + "," + frkit::fmt9(res.x_star[x].real()) + "," +
               frkit::fmt9(res.x_star[x].imag()) + "," + (parsed.observed[x] ? "1" : "0") + "\n";
    }
    const std::string imputed_path =
        imputed_out.empty() ? out_path(g, "imputed.csv") : imputed_out;
    write_file(imputed_path, csv);

    const double p_hat = p_override > 0.0
                             ? p_override
                             : static_cast<double>(obs_idx.size()) / static_cast<double>(n);
    ordered_json r;
    r["imputed_csv"] = imputed_path;
    r["converged"] = res.converged;
    r["iterations"] = res.iterations;
    r["objective_spectral_l1"] = frkit::round9(res.objective);
    r["constraint_residual"] = frkit::round9(res.constraint_residual);
    r["certified_error_bound_abs"] = frkit::round9(res.certified_error_bound);
    // leakage-free scale estimates from the observed samples alone
    const auto est = frkit::restricted_fr(frkit::apply_mask(observed, mask.indices), p_hat);
    r["p_hat"] = frkit::round9(p_hat);
    r["l2_estimate"] = frkit::round9(est.l2_estimate);
    r["fr_restricted_raw"] = frkit::round9(est.fr_raw);
    r["fr_restricted_rescaled"] = frkit::round9(est.fr_estimate);
    r["certified_error_bound_rel_leakage_free"] =
        frkit::round9(est.l2_estimate > 0.0 ? res.certified_error_bound / est.l2_estimate : 0.0);
    j["result"] = r;
    emit_report(g, j, save);
    return res.converged ? 0 : kExitNumerical;
}

// ---- constants -------------------------------------------------------------

int cmd_constants(const GlobalOpts& g, const std::vector<std::size_t>& n_grid,
                  const std::vector<double>& q_grid, std::size_t trials, double percentile,
                  const std::string& prefix, const std::string& save) {
    ordered_json j = frkit::report_envelope("constants", g.seed, !g.no_timestamp);
    ordered_json config;
    config["n_grid"] = n_grid;
    config["q_grid"] = q_grid;
    config["trials"] = trials;
    config["percentile"] = frkit::round9(percentile);
    j["config"] = config;

    const auto est = frkit::estimate_constants(n_grid, q_grid, trials, percentile, g.seed);

    auto heatmap_csv = [&](const std::vector<std::vector<double>>& m) {
        std::string csv = "N\\q";
        for (double q : q_grid) csv += "," + frkit::fmt9(q);
        csv += "\n";
        for (std::size_t i = 0; i < n_grid.size(); ++i) {
            csv += std::to_string(n_grid[i]);
            for (std::size_t k = 0; k < q_grid.size(); ++k) csv += "," + frkit::fmt9(m[i][k]);
            csv += "\n";
        }
        return csv;
    };
    const std::string ct_path = out_path(g, prefix + "_ct.csv");
    const std::string cq_path = out_path(g, prefix + "_cq_exp.csv");
    write_file(ct_path, heatmap_csv(est.ct_estimates));
    write_file(cq_path, heatmap_csv(est.cq_exp_estimates));

    ordered_json r;
    r["ct_heatmap_csv"] = ct_path;
    r["cq_exp_heatmap_csv"] = cq_path;
    r["holder_violations"] = est.holder_violations;
    ordered_json ct = ordered_json::array(), cq = ordered_json::array();
    for (std::size_t i = 0; i < n_grid.size(); ++i) {
        ordered_json ct_row = ordered_json::array(), cq_row = ordered_json::array();
        for (std::size_t k = 0; k < q_grid.size(); ++k) {
            ct_row.push_back(frkit::round9(est.ct_estimates[i][k]));
            cq_row.push_back(frkit::round9(est.cq_exp_estimates[i][k]));
        }
        ct.push_back(ct_row);
        cq.push_back(cq_row);
    }
    r["ct_estimates"] = ct;
    r["cq_exp_estimates"] = cq;
    j["result"] = r;
    emit_report(g, j, save.empty() ? out_path(g, prefix + ".json") : save);
    return 0;
}

// ---- noise -----------------------------------------------------------------

int cmd_noise(const GlobalOpts& g, const std::string& experiment, const std::string& input,
              std::size_t n, double sigma, double gamma, std::size_t trials, std::size_t copies,
              const std::string& save) {
    ordered_json j = frkit::report_envelope("noise", g.seed, !g.no_timestamp);
    ordered_json config;
    config["experiment"] = experiment;
    config["sigma"] = frkit::round9(sigma);
    config["gamma"] = frkit::round9(gamma);
    config["trials"] = trials;
    config["copies"] = copies;

    frkit::Signal base = [&] {
        if (!input.empty()) {
            SeriesArgs s;
            s.input = input;
            return load_signal(s, nullptr);
        }
        frkit::Rng rng(frkit::mix_seed(g.seed, 0xba5e));
        return frkit::random_gaussian_signal(n, rng);
    }();
    config["n"] = base.size();
    config["input"] = input.empty() ? "synthetic-gaussian" : input;
    j["config"] = config;

    ordered_json r;
    auto fill_coverage = [&r](const frkit::CoverageReport& rep) {
        r["regime_ok"] = rep.regime_ok;
        r["radius"] = frkit::round9(rep.radius);
        r["trials"] = rep.trials;
        r["violations"] = rep.violations;
        r["violation_rate"] = frkit::round9(rep.violation_rate);
        r["slack"] = frkit::round9(rep.slack);
        r["coverage"] = frkit::round9(1.0 - rep.violation_rate);
        r["pass"] = rep.pass;
        r["quantiles"]["median_deviation"] = frkit::round9(rep.median_deviation);
        r["radius_coverage"] = frkit::round9(rep.radius_coverage);
    };

    if (experiment == "perturbation") {
        const auto rep = frkit::perturbation_property_run({16, 64, 256}, trials, g.seed);
        r["trials"] = rep.trials;
        r["applicable"] = rep.applicable;
        r["violations"] = rep.violations;
        r["max_bound_ratio"] = frkit::round9(rep.max_bound_ratio);
    } else if (experiment == "gauss") {
        fill_coverage(frkit::gaussian_deviation_experiment(base, sigma, gamma, trials, g.seed));
    } else if (experiment == "average") {
        const auto rep = frkit::smoothing_experiment(base, sigma, copies, gamma, trials, g.seed);
        r["copies"] = rep.copies;
        r["trials"] = rep.trials;
        r["mean_mse"] = frkit::round9(rep.mean_mse);
        r["expected_mse"] = frkit::round9(rep.expected_mse);
        r["mse_standard_error"] = frkit::round9(rep.mse_standard_error);
        r["mse_within_3se"] = rep.mse_within_3se;
        r["radius"] = frkit::round9(rep.radius);
        r["radius_coverage"] = frkit::round9(rep.radius_coverage);
    } else if (experiment == "fr-average") {
        fill_coverage(frkit::fr_of_average_experiment(base, sigma, copies, gamma, trials, g.seed));
        const auto medians =
            frkit::fr_of_average_sweep(base, sigma, {1, 4, 16, 64}, gamma, trials,
                                       frkit::mix_seed(g.seed, 1));
        ordered_json sweep = ordered_json::array();
        for (double m : medians) sweep.push_back(frkit::round9(m));
        r["median_deviation_by_copies"] = sweep;
        r["copy_counts"] = std::vector<int>{1, 4, 16, 64};
    } else {
        throw CLI::ValidationError(
            "--experiment must be perturbation, gauss, average, or fr-average");
    }
    j["result"] = r;
    emit_report(g, j, save);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fourier-ratio analysis toolkit"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--seed", g.seed, "random seed")->default_val(1);
    app.add_option("--format", g.format, "report format: json|csv")->default_val("json");
    app.add_flag("--no-timestamp", g.no_timestamp, "omit the timestamp field");
    app.add_option("--outdir", g.outdir, "output directory (default $FRKIT_OUT_DIR or .)");

    auto* analyze = app.add_subcommand("analyze", "compute the Fourier-ratio report of a series");
    analyze->fallthrough();
    SeriesArgs a_series;
    add_series_options(analyze, a_series);
    double a_ls_eta = 0.0;
    std::string a_save;
    analyze->add_option("--large-spectrum-eta", a_ls_eta, "also list the large spectrum at eta");
    analyze->add_option("-o,--output", a_save, "also write the report to this file");

    auto* approx = app.add_subcommand("approx", "low-degree trigonometric approximation");
    approx->fallthrough();
    SeriesArgs x_series;
    add_series_options(approx, x_series);
    std::string x_mode = "l2", x_recon, x_save;
    double x_eta = 0.5;
    int x_attempts = 50;
    approx->add_option("--mode", x_mode, "l2|linf|l1|truncate")->default_val("l2");
    approx->add_option("--eta", x_eta, "relative error target")->required();
    approx->add_option("--max-attempts", x_attempts, "resampling attempts")->default_val(50);
    approx->add_option("--recon-out", x_recon, "reconstruction CSV path");
    approx->add_option("-o,--output", x_save, "also write the report to this file");

    auto* impute = app.add_subcommand("impute", "basis-pursuit imputation of missing values");
    impute->fallthrough();
    SeriesArgs i_series;
    add_series_options(impute, i_series);
    double i_eta = 0.0, i_tol = 1e-8, i_p = 0.0;
    std::size_t i_iters = 50000;
    std::string i_out, i_save;
    impute->add_option("--eta", i_eta, "absolute L2(X) constraint radius")->default_val(0.0);
    impute->add_option("--solver-tol", i_tol, "solver tolerance")->default_val(1e-8);
    impute->add_option("--max-iters", i_iters, "iteration cap")->default_val(50000);
    impute->add_option("--p", i_p, "sampling rate override for the scale estimates");
    std::vector<std::size_t> i_sweep_q;
    std::size_t i_sweep_trials = 20;
    impute->add_option("--sweep-q", i_sweep_q,
                       "phase-transition sweep over uniform sample counts")
        ->delimiter(',');
    impute->add_option("--trials", i_sweep_trials, "trials per sweep point")->default_val(20);
    impute->add_option("-o,--output", i_out, "imputed CSV path");
    impute->add_option("--report", i_save, "also write the report to this file");

    auto* constants = app.add_subcommand("constants", "Monte-Carlo Talagrand/Bourgain estimates");
    constants->fallthrough();
    std::vector<std::size_t> c_ns{100, 1000, 10000};
    std::vector<double> c_qs{3.0, 3.25, 3.5, 3.75, 4.0};
    std::size_t c_trials = 10000;
    double c_pct = 90.0;
    std::string c_prefix = "constants", c_save;
    constants->add_option("--n-grid", c_ns, "domain sizes")->delimiter(',');
    constants->add_option("--q-grid,--q", c_qs, "q exponents")->delimiter(',');
    constants->add_option("--trials", c_trials, "trials per cell")->default_val(10000);
    constants->add_option("--percentile", c_pct, "summary percentile")->default_val(90.0);
    constants->add_option("--prefix", c_prefix, "output file prefix")->default_val("constants");
    constants->add_option("-o,--output", c_save, "report JSON path");

    auto* noise = app.add_subcommand("noise", "stability experiments under noise");
    noise->fallthrough();
    std::string n_exp, n_input, n_save;
    std::size_t n_n = 256, n_trials = 1000, n_copies = 16;
    double n_sigma = 0.05, n_gamma = 0.1;
    noise->add_option("--experiment", n_exp, "perturbation|gauss|average|fr-average")->required();
    noise->add_option("--input", n_input, "optional base series CSV");
    noise->add_option("--n", n_n, "synthetic base-signal length")->default_val(256);
    noise->add_option("--sigma", n_sigma, "noise level")->default_val(0.05);
    noise->add_option("--gamma", n_gamma, "failure budget")->default_val(0.1);
    noise->add_option("--trials", n_trials, "Monte-Carlo trials")->default_val(1000);
    noise->add_option("--copies", n_copies, "copies to average")->default_val(16);
    noise->add_option("-o,--output", n_save, "also write the report to this file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*analyze) return cmd_analyze(g, a_series, a_ls_eta, a_save);
        if (*approx) return cmd_approx(g, x_series, x_mode, x_eta, x_attempts, x_recon, x_save);
        if (*impute)
            return cmd_impute(g, i_series, i_eta, i_tol, i_iters, i_p, i_sweep_q, i_sweep_trials,
                              i_out, i_save);
        if (*constants) return cmd_constants(g, c_ns, c_qs, c_trials, c_pct, c_prefix, c_save);
        if (*noise)
            return cmd_noise(g, n_exp, n_input, n_n, n_sigma, n_gamma, n_trials, n_copies, n_save);
    } catch (const frkit::InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.get_name() << ": " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return 0;
}

// Command-line front end for the DE-constrained smoothing toolkit.
//
// Subcommands: fit, bandwidth, simulate, mse-curve, demo-sparse,
// variance-ratio. All outputs are deterministic given flags, input files,
// and seeds. Exit codes: 0 ok, 2 configuration error, 3 data/IO error,
// 4 numerical failure.

#include "desmooth/asymptotics.hpp"
#include "desmooth/bandwidth.hpp"
#include "desmooth/de_local.hpp"
#include "desmooth/estimator.hpp"
#include "desmooth/io.hpp"
#include "desmooth/parametric.hpp"
#include "desmooth/simulation.hpp"

#include "mouse_data.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace desmooth;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

std::vector<double> linspace(double lo, double hi, int count) {
    std::vector<double> grid(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        grid[static_cast<std::size_t>(i)] =
            count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (count - 1);
    }
    return grid;
}

/// "MIN:MAX:COUNT" -> evaluation grid.
std::vector<double> parse_grid_spec(const std::string& spec) {
    const auto c1 = spec.find(':');
    const auto c2 = spec.find(':', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) {
        throw ConfigError("grid spec must be MIN:MAX:COUNT, got '" + spec + "'");
    }
    try {
        const double lo = std::stod(spec.substr(0, c1));
        const double hi = std::stod(spec.substr(c1 + 1, c2 - c1 - 1));
        const int count = std::stoi(spec.substr(c2 + 1));
        if (!(hi > lo) || count < 1) {
            throw ConfigError("grid spec needs MIN < MAX and COUNT >= 1: '" + spec + "'");
        }
        return linspace(lo, hi, count);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        throw ConfigError("grid spec must be MIN:MAX:COUNT, got '" + spec + "'");
    }
}

int threads_from_env(int requested) {
    const char* env = std::getenv("DESMOOTH_THREADS");
    if (!env || !*env) return requested;
    int cap = 0;
    try {
        cap = std::stoi(env);
    } catch (const std::exception&) {
        throw ConfigError("DESMOOTH_THREADS must be an integer, got '" + std::string(env) + "'");
    }
    if (cap < 0) throw ConfigError("DESMOOTH_THREADS must be >= 0");
    if (cap == 0) return requested; // auto
    if (requested <= 0) return cap;
    return std::min(requested, cap);
}

struct FitArgs {
    std::string input;
    std::string method;
    std::optional<double> lambda;
    bool estimate_lambda = false;
    int degree = -1;
    std::optional<double> bandwidth;
    std::string grid_spec;
    std::string output;
    std::string format = "csv";
};

EstimatorSpec resolve_method(const std::string& method, int degree, std::optional<double> lambda,
                             bool estimate_lambda, const Dataset& data) {
    std::string name = method;
    if (name == "de1" && degree >= 0) name = "de1-" + std::to_string(degree);
    std::optional<double> lam = lambda;
    if (!lam && estimate_lambda) {
        lam = fit_loglinear(data).lambda;
    }
    return EstimatorSpec::parse(name, lam);
}

int cmd_fit(const FitArgs& args) {
    const Dataset data = parse_csv(args.input);
    const EstimatorSpec spec =
        resolve_method(args.method, args.degree, args.lambda, args.estimate_lambda, data);

    std::vector<double> grid;
    if (args.grid_spec.empty()) {
        grid = linspace(data.xs().front(), data.xs().back(), 101);
    } else {
        grid = parse_grid_spec(args.grid_spec);
    }

    Fit fit;
    if (spec.method == Method::Nls) {
        const ExponentialFit nls = fit_exponential_nls(data);
        if (!nls.converged) {
            throw OptimizerFailureError("nls did not converge within the iteration cap",
                                        data.xs().front());
        }
        fit.grid = grid;
        fit.degenerate.assign(grid.size(), 0);
        fit.weight_sums.assign(grid.size(), 0.0);
        fit.method = "nls";
        for (double x : grid) fit.values.push_back(nls.predict(x, data.interval().a));
    } else if (spec.method == Method::LogLinear) {
        const LogLinearFit ll = fit_loglinear(data);
        fit.grid = grid;
        fit.degenerate.assign(grid.size(), 0);
        fit.weight_sums.assign(grid.size(), 0.0);
        fit.method = "loglinear";
        for (double x : grid) {
            fit.values.push_back(std::exp(ll.log_g_a + ll.lambda * (x - data.interval().a)));
        }
    } else {
        double h = args.bandwidth.value_or(pilot_bandwidth(data));
        if (!(h > 0.0)) {
            throw ConfigError("bandwidth must be positive (spacing heuristic degenerate; "
                              "pass -h explicitly)");
        }
        fit = fit_estimator(spec, data, Kernel{}, h, grid);
    }

    if (args.format == "json") {
        write_fit_json(fit, args.output);
    } else {
        write_fit_csv(fit, args.output);
    }
    return kExitOk;
}

struct BandwidthArgs {
    std::string input;
    std::string method;
    std::optional<double> lambda;
    bool estimate_lambda = false;
    int degree = -1;
    std::string output;
};

int cmd_bandwidth(const BandwidthArgs& args) {
    const Dataset data = parse_csv(args.input);
    const EstimatorSpec spec =
        resolve_method(args.method, args.degree, args.lambda, args.estimate_lambda, data);
    const BandwidthGrid grid = default_cv_grid(data);
    const LoocvResult result = loocv_select(data, spec, grid);
    if (!args.output.empty()) {
        std::ofstream out(args.output);
        if (!out) throw IoError("cannot open for writing: " + args.output);
        out << "h,cv_score\n";
        for (std::size_t i = 0; i < grid.size(); ++i) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", grid.values()[i], result.scores[i]);
            out << buf;
        }
    }
    std::cout << "h_star " << result.h_star << '\n';
    return kExitOk;
}

int cmd_simulate(const std::string& config_path, const std::string& output_base) {
    SimConfig config = parse_sim_config(config_path);
    config.max_threads = threads_from_env(config.max_threads);
    const SimReport report = run_mad_study(config);
    write_sim_report_csv(report, output_base + ".csv");
    write_sim_report_json(report, output_base + ".json");
    print_sim_report_table(report, std::cout);
    return kExitOk;
}

int cmd_mse_curve(const std::string& config_path, const std::string& grid_spec,
                  const std::string& output) {
    SimConfig config = parse_sim_config(config_path);
    config.max_threads = threads_from_env(config.max_threads);
    const std::vector<double> grid = parse_grid_spec(grid_spec);
    const MseCurves curves = run_mse_curve(config, grid);
    write_mse_curves_csv(curves, output);
    return kExitOk;
}

struct DemoArgs {
    std::uint64_t seed = 7;
    std::string output_dir;
    double gap_fraction = 0.30;
    double bandwidth = 3.5;
};

void write_points_csv(const std::string& path, const std::vector<double>& xs,
                      const std::vector<double>& ys) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << "x,y\n";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", xs[i], ys[i]);
        out << buf;
    }
}

bool monotone_increasing_on(const Fit& fit, const Interval& range) {
    double prev = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < fit.size(); ++i) {
        if (fit.grid[i] < range.a || fit.grid[i] > range.b || fit.degenerate[i]) continue;
        if (!std::isnan(prev) && fit.values[i] < prev - 1e-12) return false;
        prev = fit.values[i];
    }
    return true;
}

bool changes_direction_on(const Fit& fit, const Interval& range) {
    bool saw_up = false, saw_down = false;
    double prev = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < fit.size(); ++i) {
        if (fit.grid[i] < range.a || fit.grid[i] > range.b || fit.degenerate[i]) continue;
        if (!std::isnan(prev)) {
            const double d = fit.values[i] - prev;
            if (d > 1e-12) saw_up = true;
            if (d < -1e-12) saw_down = true;
        }
        prev = fit.values[i];
    }
    return saw_up && saw_down;
}

int cmd_demo_sparse(const DemoArgs& args) {
    const Dataset mouse = tools::mouse_tumor_data();
    const ExponentialFit nls = fit_exponential_nls(mouse);
    const double sigma_hat =
        std::sqrt(nls.rss / static_cast<double>(mouse.size() - 2));

    // Simulate a denser series from the fitted growth curve, then cut a
    // contiguous block out of the middle of the time range.
    const int n_sim = 41;
    const Interval range = mouse.interval();
    RngStream stream(args.seed, 0);
    std::vector<double> xs = linspace(range.a, range.b, n_sim);
    std::vector<double> ys(xs.size());
    {
        const NoiseSpec noise = NoiseSpec::normal(sigma_hat);
        for (std::size_t i = 0; i < xs.size(); ++i) {
            ys[i] = nls.predict(xs[i], range.a) + noise.draw(stream);
        }
    }

    const double mid = 0.5 * (range.a + range.b);
    const double half_gap = 0.5 * args.gap_fraction * range.length();
    const Interval gap{mid - half_gap, mid + half_gap};

    std::vector<double> kept_x, kept_y, removed_x, removed_y;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (xs[i] >= gap.a && xs[i] <= gap.b) {
            removed_x.push_back(xs[i]);
            removed_y.push_back(ys[i]);
        } else {
            kept_x.push_back(xs[i]);
            kept_y.push_back(ys[i]);
        }
    }
    Dataset kept(kept_x, kept_y, range);

    double lambda_demo;
    try {
        lambda_demo = fit_loglinear(kept).lambda;
    } catch (const NonpositiveResponseError&) {
        lambda_demo = fit_exponential_nls(kept).lambda; // some simulated y <= 0
    }

    const std::vector<double> grid = linspace(range.a, range.b, 101);
    const Kernel kernel;
    const double h = args.bandwidth;

    const Fit fit_nw = fit_local_poly(kept, 0, kernel, h, grid);
    const Fit fit_ll = fit_local_poly(kept, 1, kernel, h, grid);
    const Fit fit_lq = fit_local_poly(kept, 2, kernel, h, grid);
    const Fit fit_de =
        de1k_exponential(kept, ExponentialDE{lambda_demo}, 1, kernel, h, grid);

    const std::string dir = args.output_dir;
    write_fit_csv(fit_nw, dir + "/fit_nw.csv");
    write_fit_csv(fit_ll, dir + "/fit_ll.csv");
    write_fit_csv(fit_lq, dir + "/fit_lq.csv");
    write_fit_csv(fit_de, dir + "/fit_de1_1.csv");
    write_points_csv(dir + "/points_kept.csv", kept_x, kept_y);
    write_points_csv(dir + "/points_removed.csv", removed_x, removed_y);

    nlohmann::json report;
    report["seed"] = args.seed;
    report["lambda"] = lambda_demo;
    report["bandwidth"] = h;
    report["sigma_hat"] = sigma_hat;
    report["gap"] = {gap.a, gap.b};
    report["n_kept"] = kept_x.size();
    report["n_removed"] = removed_x.size();
    report["de1_1_monotone_in_gap"] = monotone_increasing_on(fit_de, gap);
    report["ll_changes_direction_in_gap"] = changes_direction_on(fit_ll, gap);
    report["lq_changes_direction_in_gap"] = changes_direction_on(fit_lq, gap);
    std::ofstream out(dir + "/report.json");
    if (!out) throw IoError("cannot open for writing: " + dir + "/report.json");
    out << report.dump(2) << '\n';

    std::cout << "demo-sparse: wrote 4 fit files + 2 point files + report.json to " << dir << '\n';
    return kExitOk;
}

int cmd_variance_ratio(int n, double lambda, std::uint64_t seed, double h,
                       const std::string& output) {
    const VarianceRatioStudy study = variance_ratio_study(n, lambda, seed, h);
    if (!output.empty()) {
        std::ofstream out(output);
        if (!out) throw IoError("cannot open for writing: " + output);
        out << "ratio\n";
        for (double r : study.ratios) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.17g\n", r);
            out << buf;
        }
    }
    std::cout << "mean " << study.mean_ratio << "\nmin " << study.min_ratio << "\nmax "
              << study.max_ratio << '\n';
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"DE-constrained local regression toolkit"};
    app.set_help_flag("--help", "print help"); // frees -h for --bandwidth
    app.require_subcommand(1);

    FitArgs fit_args;
    auto* fit = app.add_subcommand("fit", "fit an estimator over a grid and write CSV/JSON");
    fit->set_help_flag("--help");
    fit->add_option("-i,--input", fit_args.input, "input CSV with header x,y")->required();
    fit->add_option("-m,--method", fit_args.method,
                    "nw | ll | lq | lc | de1-k | nls | loglinear")
        ->required();
    fit->add_option("--lambda", fit_args.lambda, "growth rate for de1-k");
    fit->add_flag("--estimate-lambda", fit_args.estimate_lambda,
                  "prefit lambda by log-linear regression");
    fit->add_option("--degree", fit_args.degree, "Taylor degree when --method de1");
    fit->add_option("-h,--bandwidth", fit_args.bandwidth,
                    "kernel bandwidth (default: half the median covariate spacing)");
    fit->add_option("--grid", fit_args.grid_spec, "evaluation grid MIN:MAX:COUNT");
    fit->add_option("-o,--output", fit_args.output, "output path")->required();
    fit->add_option("--format", fit_args.format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));

    BandwidthArgs bw_args;
    auto* bw = app.add_subcommand("bandwidth", "select a bandwidth by leave-one-out CV");
    bw->set_help_flag("--help");
    bw->add_option("-i,--input", bw_args.input, "input CSV with header x,y")->required();
    bw->add_option("-m,--method", bw_args.method, "kernel method name")->required();
    bw->add_option("--lambda", bw_args.lambda, "growth rate for de1-k");
    bw->add_flag("--estimate-lambda", bw_args.estimate_lambda,
                 "prefit lambda by log-linear regression");
    bw->add_option("--degree", bw_args.degree, "Taylor degree when --method de1");
    bw->add_option("-o,--output", bw_args.output, "optional CSV of (h, cv_score)");

    std::string sim_config, sim_output = "sim_report";
    auto* sim = app.add_subcommand("simulate", "run a replicated MAD study from a JSON config");
    sim->set_help_flag("--help");
    sim->add_option("-c,--config", sim_config, "JSON config path")->required();
    sim->add_option("-o,--output", sim_output, "output base path (writes .csv and .json)");

    std::string mse_config, mse_grid = "0.01:0.99:99", mse_output = "mse_curves.csv";
    auto* mse = app.add_subcommand("mse-curve", "pointwise log-MSE curves over a grid");
    mse->set_help_flag("--help");
    mse->add_option("-c,--config", mse_config, "JSON config path")->required();
    mse->add_option("--grid", mse_grid, "evaluation grid MIN:MAX:COUNT");
    mse->add_option("-o,--output", mse_output, "output CSV path");

    DemoArgs demo_args;
    auto* demo = app.add_subcommand("demo-sparse",
                                    "sparse-gap comparison on simulated tumor growth data");
    demo->set_help_flag("--help");
    demo->add_option("--seed", demo_args.seed, "simulation seed");
    demo->add_option("-o,--output-dir", demo_args.output_dir, "output directory")->required();
    demo->add_option("--gap-fraction", demo_args.gap_fraction,
                     "fraction of the time range removed from the middle")
        ->check(CLI::Range(0.0, 0.9));
    demo->add_option("-h,--bandwidth", demo_args.bandwidth, "kernel bandwidth");

    int vr_n = 10;
    double vr_lambda = 1.0;
    std::uint64_t vr_seed = 1;
    double vr_h = kVarianceRatioBandwidth;
    std::string vr_output;
    auto* vr = app.add_subcommand("variance-ratio",
                                  "finite-sample variance ratio of DE1-1 to local constant");
    vr->set_help_flag("--help");
    vr->add_option("--n", vr_n, "design size")->check(CLI::PositiveNumber);
    vr->add_option("--lambda", vr_lambda, "growth rate");
    vr->add_option("--seed", vr_seed, "design seed");
    vr->add_option("-h,--bandwidth", vr_h, "kernel bandwidth")->check(CLI::PositiveNumber);
    vr->add_option("-o,--output", vr_output, "optional CSV of per-point ratios");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (fit->parsed()) return cmd_fit(fit_args);
        if (bw->parsed()) return cmd_bandwidth(bw_args);
        if (sim->parsed()) return cmd_simulate(sim_config, sim_output);
        if (mse->parsed()) return cmd_mse_curve(mse_config, mse_grid, mse_output);
        if (demo->parsed()) return cmd_demo_sparse(demo_args);
        if (vr->parsed()) return cmd_variance_ratio(vr_n, vr_lambda, vr_seed, vr_h, vr_output);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const EmptyDatasetError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const NonpositiveResponseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const DegenerateDesignError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const Error& e) {
        // remaining library errors are numerical failures
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumeric;
    }
    return kExitConfig;
}

#include "desmooth/io.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace desmooth {

using nlohmann::json;

namespace {

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

double parse_cell(const std::string& cell, int line_no, const std::string& origin) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(cell, &pos);
    } catch (const std::exception&) {
        throw ParseError(origin + ":" + std::to_string(line_no) + ": non-numeric cell '" + cell +
                         "'");
    }
    while (pos < cell.size() && (cell[pos] == ' ' || cell[pos] == '\t')) ++pos;
    if (pos != cell.size()) {
        throw ParseError(origin + ":" + std::to_string(line_no) + ": non-numeric cell '" + cell +
                         "'");
    }
    return v;
}

std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void check_known_keys(const json& obj, std::initializer_list<const char*> allowed,
                      const std::string& path) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* key : allowed) {
            if (it.key() == key) {
                known = true;
                break;
            }
        }
        if (!known) {
            throw ConfigError("unknown config key: " + (path.empty() ? it.key() : path + "." +
                                                                                      it.key()));
        }
    }
}

template <typename T>
T require(const json& obj, const char* key, const std::string& path) {
    if (!obj.contains(key)) {
        throw ConfigError("missing config key: " + (path.empty() ? key : path + "." + key));
    }
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("config key has wrong type: " +
                          (path.empty() ? key : path + "." + key));
    }
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    return out;
}

} // namespace

Dataset parse_csv_stream(std::istream& in, const std::string& origin) {
    std::string line;
    if (!std::getline(in, line)) {
        throw FormatError(origin + ": empty file, expected header 'x,y'");
    }
    if (strip_cr(line) != "x,y") {
        throw FormatError(origin + ": expected header 'x,y', got '" + strip_cr(line) + "'");
    }
    std::vector<double> xs, ys;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) continue;
        const std::size_t comma = line.find(',');
        if (comma == std::string::npos) {
            throw ParseError(origin + ":" + std::to_string(line_no) + ": expected 'x,y' row");
        }
        xs.push_back(parse_cell(line.substr(0, comma), line_no, origin));
        ys.push_back(parse_cell(line.substr(comma + 1), line_no, origin));
    }
    if (xs.empty()) {
        throw EmptyDatasetError(origin + ": no data rows");
    }
    return Dataset(std::move(xs), std::move(ys));
}

Dataset parse_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open input file: " + path);
    }
    return parse_csv_stream(in, path);
}

void write_fit_csv(const Fit& fit, const std::string& path) {
    auto out = open_out(path);
    out << "x0,ghat,degenerate\n";
    for (std::size_t i = 0; i < fit.size(); ++i) {
        out << format_g17(fit.grid[i]) << ',';
        if (fit.degenerate[i]) {
            out << ",1\n";
        } else {
            out << format_g17(fit.values[i]) << ",0\n";
        }
    }
}

void write_fit_json(const Fit& fit, const std::string& path) {
    json doc;
    doc["method"] = fit.method;
    doc["bandwidth"] = fit.bandwidth;
    json rows = json::array();
    for (std::size_t i = 0; i < fit.size(); ++i) {
        json row;
        row["x0"] = fit.grid[i];
        if (fit.degenerate[i]) {
            row["ghat"] = nullptr;
        } else {
            row["ghat"] = fit.values[i];
        }
        row["degenerate"] = fit.degenerate[i] != 0;
        rows.push_back(std::move(row));
    }
    doc["points"] = std::move(rows);
    auto out = open_out(path);
    out << doc.dump(2) << '\n';
}

SimConfig parse_sim_config_text(const std::string& text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(origin + ": invalid JSON: " + e.what());
    }
    if (!doc.is_object()) throw ConfigError(origin + ": config must be a JSON object");
    check_known_keys(doc, {"truth", "design", "noise", "n", "reps", "seed", "methods", "bandwidth",
                           "kernel", "threads"},
                     "");

    SimConfig config;

    const json truth = require<json>(doc, "truth", "");
    check_known_keys(truth, {"g0", "lambda"}, "truth");
    config.truth.g0 = require<double>(truth, "g0", "truth");
    config.truth.lambda = require<double>(truth, "lambda", "truth");

    const json design = require<json>(doc, "design", "");
    check_known_keys(design, {"kind", "a", "b", "alpha", "beta", "gap"}, "design");
    const std::string kind = require<std::string>(design, "kind", "design");
    if (kind == "uniform") {
        config.design = DesignSpec::uniform(design.value("a", 0.0), design.value("b", 1.0));
    } else if (kind == "beta") {
        config.design = DesignSpec::beta_random(require<double>(design, "alpha", "design"),
                                                require<double>(design, "beta", "design"));
    } else if (kind == "beta_quantile") {
        config.design = DesignSpec::beta_quantile(require<double>(design, "alpha", "design"),
                                                  require<double>(design, "beta", "design"));
    } else {
        throw ConfigError("design.kind: unknown design '" + kind + "'");
    }
    if (design.contains("gap")) {
        const json gap = design.at("gap");
        if (!gap.is_array() || gap.size() != 2) {
            throw ConfigError("design.gap: expected [lo, hi]");
        }
        config.design = config.design.with_gap({gap.at(0).get<double>(), gap.at(1).get<double>()});
    }

    const json noise = require<json>(doc, "noise", "");
    check_known_keys(noise, {"kind", "sigma", "nu", "location", "scale"}, "noise");
    const std::string noise_kind = require<std::string>(noise, "kind", "noise");
    if (noise_kind == "normal") {
        config.noise = NoiseSpec::normal(require<double>(noise, "sigma", "noise"));
    } else if (noise_kind == "student_t") {
        config.noise = NoiseSpec::student_t(require<double>(noise, "nu", "noise"));
    } else if (noise_kind == "laplace") {
        config.noise = NoiseSpec::laplace(require<double>(noise, "location", "noise"),
                                          require<double>(noise, "scale", "noise"));
    } else {
        throw ConfigError("noise.kind: unknown noise '" + noise_kind + "'");
    }

    config.n = require<int>(doc, "n", "");
    config.reps = require<int>(doc, "reps", "");
    config.seed = require<std::uint64_t>(doc, "seed", "");
    if (doc.contains("threads")) config.max_threads = require<int>(doc, "threads", "");

    const json methods = require<json>(doc, "methods", "");
    if (!methods.is_array() || methods.empty()) {
        throw ConfigError("methods: expected a nonempty array of method names");
    }
    for (const auto& m : methods) {
        if (!m.is_string()) throw ConfigError("methods: entries must be strings");
        config.methods.push_back(EstimatorSpec::parse(m.get<std::string>(), config.truth.lambda));
    }

    const json bw = require<json>(doc, "bandwidth", "");
    check_known_keys(bw, {"policy", "h"}, "bandwidth");
    const std::string policy = require<std::string>(bw, "policy", "bandwidth");
    if (policy == "loocv") {
        config.bandwidth = BandwidthPolicy::loocv();
    } else if (policy == "fixed") {
        config.bandwidth = BandwidthPolicy::fixed(require<double>(bw, "h", "bandwidth"));
    } else if (policy == "corollary") {
        config.bandwidth = BandwidthPolicy::corollary_optimal();
    } else {
        throw ConfigError("bandwidth.policy: unknown policy '" + policy + "'");
    }

    if (doc.contains("kernel")) {
        const std::string kernel = require<std::string>(doc, "kernel", "");
        if (kernel == "gaussian") {
            config.kernel = Kernel(KernelFamily::Gaussian);
        } else if (kernel == "epanechnikov") {
            config.kernel = Kernel(KernelFamily::Epanechnikov);
        } else {
            throw ConfigError("kernel: unknown kernel '" + kernel + "'");
        }
    }
    return config;
}

SimConfig parse_sim_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_sim_config_text(buffer.str(), path);
}

void write_sim_report_csv(const SimReport& report, const std::string& path) {
    auto out = open_out(path);
    out << "method,mean_mad_x1000,se_x1000,degenerate_count\n";
    for (const auto& m : report.methods) {
        out << m.method << ',' << format_g17(m.mean_mad * 1000.0) << ','
            << format_g17(m.se_mad * 1000.0) << ','
            << (m.degenerate_reps + m.nonconverged_reps) << '\n';
    }
}

void write_sim_report_json(const SimReport& report, const std::string& path) {
    json doc;
    doc["seed"] = report.seed;
    doc["n"] = report.n;
    doc["reps"] = report.reps;
    doc["config"] = report.config_echo;
    json methods = json::array();
    for (const auto& m : report.methods) {
        json jm;
        jm["method"] = m.method;
        jm["mean_mad"] = m.mean_mad;
        jm["se_mad"] = m.se_mad;
        jm["degenerate_reps"] = m.degenerate_reps;
        jm["nonconverged_reps"] = m.nonconverged_reps;
        jm["mads"] = m.mads;
        methods.push_back(std::move(jm));
    }
    doc["methods"] = std::move(methods);
    auto out = open_out(path);
    out << doc.dump(2) << '\n';
}

void print_sim_report_table(const SimReport& report, std::ostream& out) {
    out << "# " << report.config_echo << '\n';
    out << std::left << std::setw(12) << "method"
        << "mean_mad_x1000 (se)\n";
    char buf[64];
    for (const auto& m : report.methods) {
        std::snprintf(buf, sizeof(buf), "%.2f (%.2f)", m.mean_mad * 1000.0, m.se_mad * 1000.0);
        out << std::left << std::setw(12) << m.method << buf;
        if (m.degenerate_reps + m.nonconverged_reps > 0) {
            out << "  [excluded reps: " << (m.degenerate_reps + m.nonconverged_reps) << "]";
        }
        out << '\n';
    }
}

void write_mse_curves_csv(const MseCurves& curves, const std::string& path) {
    auto out = open_out(path);
    out << "x0";
    for (const auto& m : curves.methods) out << ",log_mse_" << m;
    out << '\n';
    for (std::size_t j = 0; j < curves.grid.size(); ++j) {
        out << format_g17(curves.grid[j]);
        for (std::size_t m = 0; m < curves.methods.size(); ++m) {
            out << ',';
            const double v = curves.log_mse[m][j];
            if (!std::isnan(v)) out << format_g17(v);
        }
        out << '\n';
    }
}

} // namespace desmooth

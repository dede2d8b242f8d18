#ifndef DESMOOTH_IO_HPP
#define DESMOOTH_IO_HPP

#include "desmooth/dataset.hpp"
#include "desmooth/fit.hpp"
#include "desmooth/simulation.hpp"

#include <iosfwd>
#include <string>

namespace desmooth {

/// Reads a dataset from CSV with the exact header "x,y" (UTF-8, LF or CRLF).
/// Duplicate x values are allowed; rows are sorted on construction.
/// Throws IoError (missing file), FormatError (bad header),
/// ParseError (non-numeric cell, with line number), EmptyDatasetError.
Dataset parse_csv(const std::string& path);
Dataset parse_csv_stream(std::istream& in, const std::string& origin);

/// Writes "x0,ghat,degenerate" rows, 17 significant digits, degenerate in
/// {0,1}. NaN values are written as the empty string next to degenerate=1.
void write_fit_csv(const Fit& fit, const std::string& path);

/// JSON mirror of a Fit (same fields as the CSV plus metadata).
void write_fit_json(const Fit& fit, const std::string& path);

/// Parses a simulation config document; unknown keys are rejected with the
/// offending field path. Schema (see README): truth{g0,lambda},
/// design{kind,...}, noise{kind,...}, n, reps, seed, methods[],
/// bandwidth{policy,...}, kernel.
SimConfig parse_sim_config(const std::string& path);
SimConfig parse_sim_config_text(const std::string& text, const std::string& origin);

/// CSV summary: method, mean_mad_x1000, se_x1000, degenerate_count.
void write_sim_report_csv(const SimReport& report, const std::string& path);
/// JSON document mirroring SimReport (full MAD vectors included).
void write_sim_report_json(const SimReport& report, const std::string& path);

/// Table of mean (SE) values, multiplied by 1000, two decimals.
void print_sim_report_table(const SimReport& report, std::ostream& out);

/// CSV with one x0 column and one log-MSE column per method.
void write_mse_curves_csv(const MseCurves& curves, const std::string& path);

} // namespace desmooth

#endif // DESMOOTH_IO_HPP

#pragma once

#include <iosfwd>
#include <string>

#include "bellrmt/sweep.hpp"

namespace bellrmt {

enum class OutputFormat { Csv, Json };

inline constexpr const char* kCsvHeader = "ensemble,k,N,samples,mean,std,stderr,violation_fraction,seed";
inline constexpr const char* kHistogramHeader = "ensemble,k,N,bin_lo,bin_hi,count";

/// 12 significant digits, shortest form ("%.12g").
std::string format_number(double v);

void write_csv(const SweepResult& result, std::ostream& out);
void write_histogram_csv(const SweepResult& result, std::ostream& out);
void write_json(const SweepResult& result, std::ostream& out);

/// CSV: writes `path` and the histogram sidecar `path.hist.csv`. JSON: writes `path` with
/// histograms inline. Throws IoError.
void emit_results(const SweepResult& result, OutputFormat format, const std::string& path);

/// Reads a CSV written by emit_results, with the sidecar when present.
/// Throws IoError on missing files or schema mismatch.
SweepResult read_results_csv(const std::string& path);
SweepResult read_results_json(const std::string& path);

/// Parses "hs", "structured", "maxent", "coulomb". k is attached for structured.
Ensemble parse_ensemble(const std::string& name, int k = 0);

/// SweepConfig from a JSON document with the SweepConfig field names. Ensembles are given
/// as names or as objects {"kind": ..., "k": ..., "burn_in_sweeps": ..., ...}.
SweepConfig load_sweep_config(const std::string& path);

}  // namespace bellrmt

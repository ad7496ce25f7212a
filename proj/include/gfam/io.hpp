#pragma once

#include <string>
#include <utility>
#include <vector>

#include "gfam/pipeline.hpp"
#include "gfam/types.hpp"

namespace gfam::io {

// Shortest decimal rendering that round-trips to the same double.
std::string format_number(double value);

// Strict CSV reader: header row, every cell a finite number, no missing
// values.  response_column empty selects the first column.
Dataset ingest_csv(const std::string& path, const std::string& response_column = "");

void write_dataset_csv(const Dataset& data, const std::string& path,
                       const std::string& response_name = "y");

// Keep the top_d covariates by sample variance (ties by original column
// order).  Returns the reduced dataset and the kept original indices.
std::pair<Dataset, std::vector<int>> variance_screen(const Dataset& data, int top_d);

// Covariate-only CSV whose header must contain every name in `names`
// (extra columns are ignored); returns rows in `names` order.
Mat read_points_csv(const std::string& path, const std::vector<std::string>& names);

// Versioned persisted fit state: candidates, probabilities, fit summaries,
// basis definitions and draws, so predict does not recompute the pipeline.
void save_fit_state(const pipeline::FitResult& fit, const std::string& path);
pipeline::FitResult load_fit_state(const std::string& path);

// Human/machine-readable fit summary document (JSON).
std::string fit_summary_json(const pipeline::FitResult& fit, int top_k, double level,
                             std::uint64_t seed, int band_points = 100);

}  // namespace gfam::io

#pragma once

#include <filesystem>
#include <string>

#include "htkm/selection.hpp"
#include "htkm/solver.hpp"

namespace htkm {

/// JSON renderings of the result types. Indices (active sets, assignments,
/// labels) are 1-based in all serialized artifacts; numbers round-trip at
/// full double precision. Serialization is deterministic: equal values
/// produce byte-identical text.
std::string to_json_string(const FitResult& fit);
std::string to_json_string(const PathResult& path);
std::string to_json_string(const SelectionReport& report);

void write_text_file(const std::string& text,
                     const std::filesystem::path& path);

/// TSV of column norms along a path: header line, then one row per grid
/// point holding lambda followed by the p center column norms d_j.
std::string path_norms_tsv(const PathResult& path, const DataMatrix& data);

}  // namespace htkm

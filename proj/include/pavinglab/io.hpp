#pragma once

#include <string>

#include "pavinglab/block.hpp"
#include "pavinglab/expander.hpp"
#include "pavinglab/paving.hpp"
#include "pavinglab/types.hpp"

namespace pavinglab {

// MatrixMarket, complex general. Readers accept array and coordinate
// formats, real or complex fields; writers emit the exact banner required
// by the format. All throws are IoError.
Mat read_matrix_market(const std::string& path);
void write_matrix_market(const std::string& path, const Mat& a,
                         bool coordinate = false);

// Block operators travel as a JSON manifest {"blocks":[{"n":..,"mm":path}]}
// with per-block MatrixMarket files; "mm" paths are relative to the
// manifest's directory.
BlockOperator read_block_operator(const std::string& manifest_path);
void write_block_operator(const std::string& manifest_path,
                          const BlockOperator& op, bool coordinate = false);

// {"m":int,"colors":[[int,...],...]}, classes 1-based.
std::string partition_to_json(const PavingPartition& part);
PavingPartition partition_from_json(const std::string& text);

// {"n":int,"perms":[[1-based images],...]}.
std::string permutation_set_to_json(const PermutationSet& ps);
PermutationSet permutation_set_from_json(const std::string& text);

// Shortest round-trip decimal formatting, used by all report writers.
std::string format_double(double v);

}  // namespace pavinglab

/*
   Copyright 2026, The svq Authors.

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/
#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "svq/core.hpp"
#include "svq/train.hpp"

namespace svq {

/**
 * Numeric CSV: one row per line, comma separated, values with 17 significant
 * digits. Lines starting with '#' are comments and blank lines are skipped.
 */
void write_matrix_csv(std::ostream& out, const Matrix& m, const std::vector<std::string>& comments = {});
Matrix read_matrix_csv(std::istream& in);
Matrix read_matrix_csv(const std::filesystem::path& path);
void save_matrix_csv(const std::filesystem::path& path, const Matrix& m,
                     const std::vector<std::string>& comments = {});

/// One line of 1-based code indices per input.
void write_index_csv(std::ostream& out, const std::vector<CodeSample>& samples);
std::vector<CodeSample> read_index_csv(std::istream& in);

/// "step,d1_1,d2_1,s_1,...,total", one row per step (the model before that step's update).
void write_trace_csv(std::ostream& out, const TrainingTrace& trace);

/// "step,stage,code,x1,...": one row per reconstruction vector per snapshot, 1-based stage and code.
void write_snapshots_csv(std::ostream& out, const TrainingTrace& trace);
std::vector<Snapshot> read_snapshots_csv(std::istream& in);

}  // namespace svq

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

#include "svq/core.hpp"

namespace svq {

inline constexpr int kModelFormatVersion = 1;

/**
 * Model document:
 *   {"version": 1, "stages": [{"dim_in", "M", "n", "weights", "biases", "recon"}],
 *    "stage_weights": [...]}
 * `weights` and `recon` are arrays of M rows. Numbers carry 17 significant
 * digits so a save/load cycle is exact; equal models serialise to identical bytes.
 */
void write_model(std::ostream& out, const ChainModel& chain);
std::string model_to_json(const ChainModel& chain);
ChainModel model_from_json(const std::string& text);

void save_model(const std::filesystem::path& path, const ChainModel& chain);
ChainModel load_model(const std::filesystem::path& path);

}  // namespace svq

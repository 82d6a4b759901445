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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "svq/data.hpp"
#include "svq/train.hpp"

namespace svq {

/**
 * Everything needed to reproduce a training run: the hump source (absent when
 * the data comes from a file), stage shapes, initialisation scale and schedule.
 */
struct Experiment {
    std::string name;
    std::optional<HumpPairSource> source;
    std::vector<StageLayout> layout;
    double init_scale = 0.1;
    TrainingSchedule schedule;

    void validate() const;
};

std::vector<std::string> preset_names();

/// Throws InvalidInput for an unknown name.
Experiment expand_preset(const std::string& name, std::uint64_t seed);

/**
 * Plain-text table of an experiment's stages and phases, e.g.
 *
 *   preset correlated-joint
 *   source hump-pair dim=24 half_width=1.5 amplitude=1 placement=correlated offsets=[4,8]
 *   stage 1 M=16 n=3
 *   phase 1 steps=500 eps=0.2 s=1
 */
std::string describe_experiment(const Experiment& e);

/**
 * Experiment file:
 *   {"name": "...", "source": {"placement", "dim", "half_width", "amplitude",
 *    "offset_min", "offset_max"}, "stages": [{"M", "n"}], "init_scale",
 *    "bias_norm": "gradient" | "bias-magnitude", "snapshot_stride",
 *    "phases": [{"steps", "eps" | "eps_w"/"eps_b"/"eps_x", "s"}]}
 * Scalar eps and s apply to every stage; lists give one value per stage.
 * Everything except "stages" and "phases" is optional. The seed is not part
 * of the file. Without a source, the first stage takes `first_dim` inputs.
 */
Experiment experiment_from_json(const std::string& text, std::size_t first_dim);
std::string experiment_to_json(const Experiment& e);

}  // namespace svq

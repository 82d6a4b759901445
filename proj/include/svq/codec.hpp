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

#include <vector>

#include "svq/core.hpp"
#include "svq/objective.hpp"

namespace svq {

struct EncodeResult {
    std::vector<CodeSample> codes;  // one per input row
    /// Mean of 2 |x - reconstruct(code)|^2 over the inputs, with its standard error.
    DistortionEstimate distortion;
};

/// Samples `n` code indices per input row from the stage's posterior.
EncodeResult encode(const StageModel& stage, const Matrix& inputs, std::size_t n, Rng& rng);

/// One reconstruction row per code sample.
Matrix decode(const StageModel& stage, const std::vector<CodeSample>& codes);

/// 2 * mean over rows of |original - decoded|^2.
double round_trip_distortion(const Matrix& original, const Matrix& decoded);

}  // namespace svq

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
#include "svq/data.hpp"

namespace svq {

/**
 * Heuristic thresholds for labelling a trained first stage. The defaults are
 * the frozen values from config/classify.json (see tools/calibrate_thresholds).
 */
struct ClassifyThresholds {
    double code_fraction = 0.75;       // share of code indices that must show the pattern
    double input_fraction = 0.75;      // share of inputs that must be separation-invariant
    double theta_inv = 0.25;           // total-variation threshold on posterior change
    double joint_spread_max = 0.9;     // pixels; "low" response spread for joint codes

    static ClassifyThresholds load(const std::filesystem::path& path);
};

enum class EncoderType { factorial_like, joint_like, invariant_like, mixed };

std::string to_string(EncoderType t);

struct CodeMetrics {
    std::size_t bump_count = 0;
    std::vector<std::size_t> peaks;  // 1-based pixel of each bump's maximum
    double response_spread = 0.0;    // pixels
};

struct InvarianceMetrics {
    /// Per input: mean TV distance to inputs with the same centroid and separation +-2.
    std::vector<double> separation_variation;
    /// Per input: mean TV distance to inputs with the same separation and centroid +-1.
    std::vector<double> centroid_variation;
    /// Share of inputs (that have a separation neighbour) with sep < theta < centroid.
    double invariant_fraction = 0.0;
};

struct EncoderTypeReport {
    std::vector<CodeMetrics> codes;
    InvarianceMetrics invariance;
    std::size_t single_bump_distinct = 0;  // bump_count 1, distinct peak pixels
    std::size_t double_bump_in_range = 0;  // bump_count 2, peak separation in [offset_min, offset_max]
    std::size_t double_bump = 0;
    EncoderType type = EncoderType::mixed;
};

/**
 * Number of contiguous circular runs of components above half the vector's
 * maximum. A vector whose maximum is not positive, or whose every component is
 * above the threshold, has no bump.
 */
std::size_t bump_count(const Vector& v);

/// Bumps with the (1-based) position of each run's maximum.
std::vector<std::size_t> bump_peaks(const Vector& v);

/// Total-variation distance 0.5 * sum |p - q|.
double tv_distance(const Vector& p, const Vector& q);

/// Posterior changes under matched one-pixel object displacements (see InvarianceMetrics).
InvarianceMetrics invariance_metrics(const StageModel& stage, const HumpPairSource& source,
                                     double theta_inv);

/// Classifies the first stage of `model` on the configurations of `source`.
EncoderTypeReport classify_encoder(const ChainModel& model, const HumpPairSource& source,
                                   const ClassifyThresholds& thresholds = {});

void print_report(std::ostream& out, const EncoderTypeReport& report);

}  // namespace svq

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

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "svq/core.hpp"
#include "svq/dataset.hpp"

namespace svq {

/// Distortion terms of one stage, before stage weighting.
struct StageTerms {
    double d1 = 0.0;
    double d2 = 0.0;
    double weight = 0.0;  // s
};

/**
 * Weighted chain objective. `d1` and `d2` are the stage-weighted sums
 * (sum over l of s(l) * d1(l), likewise d2) and `total` = d1 + d2.
 */
struct ObjectiveReport {
    double d1 = 0.0;
    double d2 = 0.0;
    double total = 0.0;
    std::vector<StageTerms> per_stage;
};

/// (2/n) E_x sum_y Pr(y|x) |x - x'(y)|^2, exact over the dataset.
double d1_stage(const StageModel& stage, const Dataset& data);

/// (2(n-1)/n) E_x |x - sum_y Pr(y|x) x'(y)|^2, exact over the dataset.
double d2_stage(const StageModel& stage, const Dataset& data);

/// Both terms in one pass; `weight` is left at 0.
StageTerms stage_terms(const StageModel& stage, const Dataset& data);

/// Sum over stages of s(l) (D1(l) + D2(l)); stage l > 1 sees the posteriors of stage l-1.
ObjectiveReport chain_objective(const ChainModel& chain, const Dataset& data);

struct DistortionEstimate {
    double mean = 0.0;
    double std_error = 0.0;
};

/**
 * Monte Carlo estimate of the true distortion D = 2 E_x E_{y|x} |x - x'(y)|^2
 * for the n-sample encoder. The expectation over x is taken exactly over the
 * dataset weights; for each vector `samples_per_x` code vectors are drawn and
 * the standard error is that of the weighted mean over those draws.
 */
DistortionEstimate estimate_true_D(const StageModel& stage, const Dataset& data,
                                   std::size_t samples_per_x, Rng& rng);

struct LbgResult {
    Matrix codebook;               // M x dim
    double distortion = 0.0;       // E_x min_c |x - c|^2 after the last iteration
    std::vector<double> history;   // distortion at each assignment step
};

/// Lloyd iterations from a given codebook. Empty cells are re-seeded with the worst-coded vector.
LbgResult lloyd(const Dataset& data, Matrix codebook, std::size_t iterations);

/// First M distinct vectors of the dataset under a seeded shuffle.
Matrix lbg_initial_codebook(const Dataset& data, std::size_t codebook_size, std::uint64_t seed);

/// Deterministic nearest-neighbour VQ baseline (the n = 1 limit).
LbgResult lbg_baseline(const Dataset& data, std::size_t codebook_size, std::size_t iterations,
                       std::uint64_t seed = 0);

/// One CSV row: step, then d1,d2,s for each stage, then total.
void write_report_csv_header(std::ostream& out, std::size_t num_stages);
void write_report_csv_row(std::ostream& out, std::size_t step, const ObjectiveReport& report);

}  // namespace svq

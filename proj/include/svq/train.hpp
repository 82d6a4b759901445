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
#include <functional>
#include <vector>

#include "svq/core.hpp"
#include "svq/dataset.hpp"
#include "svq/grad.hpp"
#include "svq/objective.hpp"

namespace svq {

/// Shape of one stage before initialisation.
struct StageLayout {
    std::size_t dim_in = 0;
    std::size_t codebook_size = 0;
    std::size_t num_samples = 1;
};

/**
 * Weights uniform in [-init_scale, init_scale], biases zero, reconstruction
 * vectors at the mean of the stage's input over `data` plus uniform noise of
 * the same scale. Stage l > 1 takes its mean from the forward-propagated
 * posteriors of the already initialised earlier stages. Stage weights start at 1.
 */
ChainModel init_model(const std::vector<StageLayout>& layout, const Dataset& data, std::uint64_t seed,
                      double init_scale = 0.1);

/**
 * Points the encoder of `stage` at its own reconstruction vectors:
 * w(y) = beta x'(y), b(y) = -beta |x'(y)|^2 / 2, so that larger beta
 * approaches nearest-neighbour encoding. Used to start from a given code book.
 */
void set_prototype_encoder(StageModel& stage, double beta);

/// How the bias gradient is normalised.
enum class BiasNorm {
    gradient,        // max_y |g_b(y)|: bias moves by at most eps per step
    bias_magnitude,  // max_y |b(y)|
};

struct Normalizers {
    double g_w0 = 0.0;
    double g_b0 = 0.0;
    double g_x0 = 0.0;
};

/// g_w0 = max_y sqrt(|g_w(y)|^2 / dim); g_x0 likewise; g_b0 per `mode`.
Normalizers normalizers(const StageGradient& grad, const StageModel& stage,
                        BiasNorm mode = BiasNorm::gradient);

struct TrainingPhase {
    std::size_t steps = 1;
    std::vector<double> eps_w;          // per stage
    std::vector<double> eps_b;          // per stage
    std::vector<double> eps_x;          // per stage
    std::vector<double> stage_weights;  // s per stage

    /// Same eps for every kind, `num_stages` copies.
    static TrainingPhase uniform(std::size_t steps, double eps, std::vector<double> stage_weights);
    void validate(std::size_t num_stages) const;
};

struct TrainingSchedule {
    std::vector<TrainingPhase> phases;
    std::uint64_t seed = 0;
    BiasNorm bias_norm = BiasNorm::gradient;
    std::size_t snapshot_stride = 10;

    std::size_t total_steps() const;
    void validate(std::size_t num_stages) const;
};

/// Normalisers below this are treated as zero and their block is left unchanged.
inline constexpr double kZeroNormalizer = 1e-300;

/// One normalised descent step: each block moves by -eps * g / g0.
ChainModel update_step(const ChainModel& chain, const ChainGradient& grad, const TrainingPhase& phase,
                       BiasNorm mode = BiasNorm::gradient);

/// Largest change made by one update, in the units the step sizes bound.
struct StepChange {
    double w_rms = 0.0;  // max_y |dw(y)| / sqrt(dim)
    double b = 0.0;      // max_y |db(y)|
    double x_rms = 0.0;  // max_y |dx'(y)| / sqrt(dim)
};

/// Per-stage change between two models with identical shapes.
std::vector<StepChange> measure_change(const ChainModel& before, const ChainModel& after);

struct Snapshot {
    std::size_t step = 0;        // number of updates applied so far
    std::vector<Matrix> recon;   // one matrix per stage
};

struct TrainingTrace {
    /// reports[t] is the objective evaluated before update t+1.
    std::vector<ObjectiveReport> reports;
    /// changes[t][l]: how far stage l moved in update t+1, with the eps that bounded it.
    std::vector<std::vector<StepChange>> changes;
    std::vector<std::vector<StepChange>> limits;
    std::vector<Snapshot> snapshots;
};

/// Called after every update with (step, model).
using StepObserver = std::function<void(std::size_t, const ChainModel&)>;

struct TrainingResult {
    ChainModel model;
    TrainingTrace trace;
};

/**
 * Runs the schedule. Every step evaluates the exact gradient over the whole
 * dataset, so the result depends only on the inputs (the schedule seed is
 * consumed by init_model, not here).
 */
TrainingResult train(ChainModel chain, const Dataset& data, const TrainingSchedule& schedule,
                     const StepObserver& observer = {});

}  // namespace svq

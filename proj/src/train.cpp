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
#include "svq/train.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace svq {

ChainModel init_model(const std::vector<StageLayout>& layout, const Dataset& data, std::uint64_t seed,
                      double init_scale) {
    if (layout.empty()) throw InvalidInput("model layout has no stages");
    if (!(init_scale >= 0.0)) throw InvalidInput("init_scale must be >= 0");
    if (layout.front().dim_in != data.dim()) throw InvalidInput("first stage dim_in must match the data");

    Rng rng(seed);
    auto noise = [&](Eigen::Index rows, Eigen::Index cols) {
        Matrix m(rows, cols);
        for (Eigen::Index i = 0; i < rows; ++i)
            for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.uniform(-init_scale, init_scale);
        return m;
    };

    ChainModel chain;
    Matrix inputs = data.vectors;
    for (std::size_t l = 0; l < layout.size(); ++l) {
        const StageLayout& sl = layout[l];
        if (l > 0 && sl.dim_in != layout[l - 1].codebook_size) {
            throw InvalidModel("stage " + std::to_string(l + 1) + " dim_in must equal M of stage " +
                               std::to_string(l));
        }
        StageModel stage(sl.dim_in, sl.codebook_size, sl.num_samples);
        stage.weights = noise(stage.weights.rows(), stage.weights.cols());
        const Vector mean = inputs.transpose() * data.weights;
        stage.recon = noise(stage.recon.rows(), stage.recon.cols());
        stage.recon.rowwise() += mean.transpose();
        if (l + 1 < layout.size()) inputs = posteriors(stage, inputs);
        chain.stages.push_back(std::move(stage));
        chain.stage_weights.push_back(1.0);
    }
    chain.validate();
    return chain;
}

void set_prototype_encoder(StageModel& stage, double beta) {
    stage.validate();
    if (!(beta >= 0.0)) throw InvalidInput("beta must be >= 0");
    stage.weights = beta * stage.recon;
    stage.biases = -0.5 * beta * stage.recon.rowwise().squaredNorm();
}

namespace {

double max_row_rms(const Matrix& g) {
    if (g.cols() == 0) return 0.0;
    return std::sqrt(g.rowwise().squaredNorm().maxCoeff() / static_cast<double>(g.cols()));
}

}  // namespace

Normalizers normalizers(const StageGradient& grad, const StageModel& stage, BiasNorm mode) {
    if (grad.g_w.rows() != stage.weights.rows() || grad.g_w.cols() != stage.weights.cols() ||
        grad.g_b.size() != stage.biases.size() || grad.g_recon.rows() != stage.recon.rows() ||
        grad.g_recon.cols() != stage.recon.cols()) {
        throw InvalidInput("gradient shape does not match stage");
    }
    Normalizers n;
    n.g_w0 = max_row_rms(grad.g_w);
    n.g_x0 = max_row_rms(grad.g_recon);
    n.g_b0 = mode == BiasNorm::gradient ? grad.g_b.cwiseAbs().maxCoeff() : stage.biases.cwiseAbs().maxCoeff();
    return n;
}

TrainingPhase TrainingPhase::uniform(std::size_t steps, double eps, std::vector<double> stage_weights) {
    TrainingPhase p;
    p.steps = steps;
    p.eps_w.assign(stage_weights.size(), eps);
    p.eps_b.assign(stage_weights.size(), eps);
    p.eps_x.assign(stage_weights.size(), eps);
    p.stage_weights = std::move(stage_weights);
    return p;
}

void TrainingPhase::validate(std::size_t num_stages) const {
    if (steps < 1) throw InvalidInput("a training phase needs at least one step");
    for (const auto* v : {&eps_w, &eps_b, &eps_x, &stage_weights}) {
        if (v->size() != num_stages) {
            throw InvalidInput("phase lists must have one entry per stage (" + std::to_string(num_stages) + ")");
        }
        for (const double e : *v) {
            if (!(e >= 0.0)) throw InvalidInput("step sizes and stage weights must be >= 0");
        }
    }
}

std::size_t TrainingSchedule::total_steps() const {
    std::size_t total = 0;
    for (const auto& p : phases) total += p.steps;
    return total;
}

void TrainingSchedule::validate(std::size_t num_stages) const {
    if (phases.empty()) throw InvalidInput("training schedule has no phases");
    if (snapshot_stride == 0) throw InvalidInput("snapshot stride must be >= 1");
    for (const auto& p : phases) p.validate(num_stages);
}

ChainModel update_step(const ChainModel& chain, const ChainGradient& grad, const TrainingPhase& phase,
                       BiasNorm mode) {
    phase.validate(chain.size());
    if (grad.per_stage.size() != chain.size()) throw InvalidInput("gradient has wrong stage count");
    ChainModel next = chain;
    for (std::size_t l = 0; l < chain.size(); ++l) {
        StageModel& st = next.stages[l];
        const StageGradient& g = grad.per_stage[l];
        const Normalizers norm = normalizers(g, chain.stages[l], mode);
        if (norm.g_w0 >= kZeroNormalizer) st.weights -= (phase.eps_w[l] / norm.g_w0) * g.g_w;
        if (norm.g_b0 >= kZeroNormalizer) st.biases -= (phase.eps_b[l] / norm.g_b0) * g.g_b;
        if (norm.g_x0 >= kZeroNormalizer) st.recon -= (phase.eps_x[l] / norm.g_x0) * g.g_recon;
    }
    return next;
}

std::vector<StepChange> measure_change(const ChainModel& before, const ChainModel& after) {
    if (before.size() != after.size()) throw InvalidInput("models have different stage counts");
    std::vector<StepChange> out;
    for (std::size_t l = 0; l < before.size(); ++l) {
        const StageModel& a = before.stages[l];
        const StageModel& b = after.stages[l];
        StepChange c;
        c.w_rms = max_row_rms(b.weights - a.weights);
        c.b = (b.biases - a.biases).cwiseAbs().maxCoeff();
        c.x_rms = max_row_rms(b.recon - a.recon);
        out.push_back(c);
    }
    return out;
}

TrainingResult train(ChainModel chain, const Dataset& data, const TrainingSchedule& schedule,
                     const StepObserver& observer) {
    chain.validate();
    schedule.validate(chain.size());
    if (data.dim() != chain.stages.front().dim_in) throw InvalidInput("data dimension does not match model");

    TrainingResult result;
    TrainingTrace& trace = result.trace;
    const std::size_t total = schedule.total_steps();
    trace.reports.reserve(total);

    auto snapshot = [&](std::size_t step) {
        Snapshot s{step, {}};
        for (const auto& st : chain.stages) s.recon.push_back(st.recon);
        trace.snapshots.push_back(std::move(s));
    };
    snapshot(0);

    std::size_t step = 0;
    for (const TrainingPhase& phase : schedule.phases) {
        chain.stage_weights = phase.stage_weights;
        std::vector<StepChange> limit;
        for (std::size_t l = 0; l < chain.size(); ++l) {
            limit.push_back({phase.eps_w[l], phase.eps_b[l], phase.eps_x[l]});
        }
        for (std::size_t k = 0; k < phase.steps; ++k) {
            ObjectiveReport report = chain_objective(chain, data);
            if (!std::isfinite(report.total)) {
                throw NumericalFailure("objective became non-finite at step " + std::to_string(step + 1));
            }
            const ChainGradient grad = chain_gradient(chain, data);
            ChainModel next = update_step(chain, grad, phase, schedule.bias_norm);
            trace.changes.push_back(measure_change(chain, next));
            trace.limits.push_back(limit);
            trace.reports.push_back(std::move(report));
            chain = std::move(next);
            ++step;
            if (step % schedule.snapshot_stride == 0 || step == total) snapshot(step);
            if (observer) observer(step, chain);
        }
    }
    result.model = std::move(chain);
    return result;
}

}  // namespace svq

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
#include <vector>

#include "svq/types.hpp"

namespace svq {

/**
 * One stochastic encoder/decoder stage.
 *
 * Code index y is drawn with probability proportional to
 * Q(y|x) = sigmoid(w(y).x + b(y)); n indices are drawn independently and the
 * reconstruction is the mean of their reconstruction vectors.
 *
 * Row y-1 of `weights` and `recon` belongs to code index y. Code indices are
 * 1-based wherever they are visible (CodeSample, files, CLI).
 */
struct StageModel {
    std::size_t dim_in = 0;
    std::size_t codebook_size = 0;  // M
    std::size_t num_samples = 1;    // n
    Matrix weights;                 // M x dim_in
    Vector biases;                  // M
    Matrix recon;                   // M x dim_in

    StageModel() = default;
    /// Zero-initialised stage.
    StageModel(std::size_t dim_in, std::size_t codebook_size, std::size_t num_samples);

    /// Throws InvalidInput if the shape invariants do not hold.
    void validate() const;
};

/// Linear chain of stages; stage l+1 consumes the posterior of stage l.
struct ChainModel {
    std::vector<StageModel> stages;
    std::vector<double> stage_weights;  // s, one per stage

    std::size_t size() const { return stages.size(); }

    /// Throws InvalidModel on broken links or bad stage weights.
    void validate() const;
};

/// Pr(y|x) for y = 1..M, stored at probs[y-1].
struct Posterior {
    Vector probs;
};

/// n code indices, each in [1, M].
struct CodeSample {
    std::vector<std::size_t> indices;
};

/// Numerically stable logistic function.
double sigmoid(double a);

/// Q(y|x) for 1-based code index y.
double q_unnormalised(const StageModel& stage, const Vector& x, std::size_t y);

Posterior posterior(const StageModel& stage, const Vector& x);

/// Posteriors for every row of `inputs`; result is N x M.
Matrix posteriors(const StageModel& stage, const Matrix& inputs);

/// Draws n i.i.d. indices. Negative entries are clamped to zero and the rest renormalised.
CodeSample sample_code(const Posterior& posterior, std::size_t n, Rng& rng);

/// Mean of the selected reconstruction vectors.
Vector reconstruct(const StageModel& stage, const CodeSample& sample);

/// Sum over y of Pr(y|x) x'(y).
Vector expected_reconstruction(const StageModel& stage, const Vector& x);

/// Posterior of every stage, in stage order.
std::vector<Posterior> chain_forward(const ChainModel& chain, const Vector& x);

/// Batched chain_forward: entry l holds the N x M(l) posteriors of stage l.
std::vector<Matrix> chain_forward(const ChainModel& chain, const Matrix& inputs);

}  // namespace svq

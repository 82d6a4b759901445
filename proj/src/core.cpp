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
#include "svq/core.hpp"

#include <cmath>
#include <string>

namespace svq {

namespace {

// log(sigmoid(a)) without overflow or cancellation.
double log_sigmoid(double a) {
    return a >= 0.0 ? -std::log1p(std::exp(-a)) : a - std::log1p(std::exp(a));
}

void check_input(const StageModel& stage, Eigen::Index len) {
    if (static_cast<std::size_t>(len) != stage.dim_in) {
        throw InvalidInput("input has length " + std::to_string(len) + ", stage expects " +
                           std::to_string(stage.dim_in));
    }
}

// Normalises one row of log Q values in place into probabilities.
template <typename Row>
void normalise_log_row(Row&& row) {
    const double peak = row.maxCoeff();
    row = (row.array() - peak).exp();
    row /= row.sum();
}

}  // namespace

StageModel::StageModel(std::size_t dim_in_, std::size_t codebook_size_, std::size_t num_samples_)
    : dim_in(dim_in_),
      codebook_size(codebook_size_),
      num_samples(num_samples_),
      weights(Matrix::Zero(codebook_size_, dim_in_)),
      biases(Vector::Zero(codebook_size_)),
      recon(Matrix::Zero(codebook_size_, dim_in_)) {
    validate();
}

void StageModel::validate() const {
    if (dim_in == 0 || codebook_size == 0 || num_samples == 0) {
        throw InvalidInput("stage needs dim_in >= 1, M >= 1 and n >= 1");
    }
    const auto m = static_cast<Eigen::Index>(codebook_size);
    const auto d = static_cast<Eigen::Index>(dim_in);
    if (weights.rows() != m || weights.cols() != d || biases.size() != m || recon.rows() != m ||
        recon.cols() != d) {
        throw InvalidInput("stage parameter shapes do not match (M=" + std::to_string(m) +
                           ", dim_in=" + std::to_string(d) + ")");
    }
}

void ChainModel::validate() const {
    if (stages.empty()) throw InvalidModel("chain has no stages");
    if (stage_weights.size() != stages.size()) {
        throw InvalidModel("chain needs one stage weight per stage");
    }
    bool any_positive = false;
    for (std::size_t l = 0; l < stages.size(); ++l) {
        try {
            stages[l].validate();
        } catch (const InvalidInput& e) {
            throw InvalidModel("stage " + std::to_string(l + 1) + ": " + e.what());
        }
        if (l > 0 && stages[l].dim_in != stages[l - 1].codebook_size) {
            throw InvalidModel("stage " + std::to_string(l + 1) + " has dim_in " +
                               std::to_string(stages[l].dim_in) + " but stage " +
                               std::to_string(l) + " has M " +
                               std::to_string(stages[l - 1].codebook_size));
        }
        if (!(stage_weights[l] >= 0.0)) throw InvalidModel("stage weights must be >= 0");
        any_positive = any_positive || stage_weights[l] > 0.0;
    }
    if (!any_positive) throw InvalidModel("at least one stage weight must be positive");
}

double sigmoid(double a) {
    if (a >= 0.0) return 1.0 / (1.0 + std::exp(-a));
    const double e = std::exp(a);
    return e / (1.0 + e);
}

double q_unnormalised(const StageModel& stage, const Vector& x, std::size_t y) {
    check_input(stage, x.size());
    if (y < 1 || y > stage.codebook_size) {
        throw InvalidInput("code index " + std::to_string(y) + " outside [1, " +
                           std::to_string(stage.codebook_size) + "]");
    }
    const auto row = static_cast<Eigen::Index>(y - 1);
    return sigmoid(stage.weights.row(row).dot(x) + stage.biases(row));
}

Posterior posterior(const StageModel& stage, const Vector& x) {
    check_input(stage, x.size());
    Vector logq = stage.weights * x + stage.biases;
    for (auto& a : logq) a = log_sigmoid(a);
    normalise_log_row(logq);
    return Posterior{std::move(logq)};
}

Matrix posteriors(const StageModel& stage, const Matrix& inputs) {
    check_input(stage, inputs.cols());
    Matrix logq = inputs * stage.weights.transpose();
    logq.rowwise() += stage.biases.transpose();
    logq = logq.unaryExpr(&log_sigmoid);
    for (Eigen::Index i = 0; i < logq.rows(); ++i) normalise_log_row(logq.row(i));
    return logq;
}

CodeSample sample_code(const Posterior& posterior, std::size_t n, Rng& rng) {
    if (n == 0) throw InvalidInput("number of samples must be >= 1");
    const Vector p = posterior.probs.cwiseMax(0.0);
    const double total = p.sum();
    if (!(total > 0.0)) throw InvalidInput("posterior has no positive mass");

    CodeSample out;
    out.indices.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double u = rng.uniform() * total;
        double cumulative = 0.0;
        std::size_t chosen = 0;
        for (Eigen::Index y = 0; y < p.size(); ++y) {
            if (p(y) <= 0.0) continue;
            cumulative += p(y);
            chosen = static_cast<std::size_t>(y) + 1;
            if (u < cumulative) break;
        }
        out.indices.push_back(chosen);
    }
    return out;
}

Vector reconstruct(const StageModel& stage, const CodeSample& sample) {
    if (sample.indices.empty()) throw InvalidInput("empty code sample");
    Vector sum = Vector::Zero(static_cast<Eigen::Index>(stage.dim_in));
    for (const std::size_t y : sample.indices) {
        if (y < 1 || y > stage.codebook_size) {
            throw InvalidInput("code index " + std::to_string(y) + " outside [1, " +
                               std::to_string(stage.codebook_size) + "]");
        }
        sum += stage.recon.row(static_cast<Eigen::Index>(y - 1)).transpose();
    }
    return sum / static_cast<double>(sample.indices.size());
}

Vector expected_reconstruction(const StageModel& stage, const Vector& x) {
    const Posterior post = posterior(stage, x);
    return stage.recon.transpose() * post.probs;
}

std::vector<Posterior> chain_forward(const ChainModel& chain, const Vector& x) {
    chain.validate();
    std::vector<Posterior> out;
    out.reserve(chain.size());
    const Vector* input = &x;
    for (const StageModel& stage : chain.stages) {
        out.push_back(posterior(stage, *input));
        input = &out.back().probs;
    }
    return out;
}

std::vector<Matrix> chain_forward(const ChainModel& chain, const Matrix& inputs) {
    chain.validate();
    std::vector<Matrix> out;
    out.reserve(chain.size());
    const Matrix* input = &inputs;
    for (const StageModel& stage : chain.stages) {
        out.push_back(posteriors(stage, *input));
        input = &out.back();
    }
    return out;
}

}  // namespace svq

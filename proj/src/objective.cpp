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
#include "svq/objective.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>

#include "svq/numfmt.hpp"

namespace svq {

namespace {

void check_dims(const StageModel& stage, const Dataset& data) {
    if (data.dim() != stage.dim_in) {
        throw InvalidInput("dataset dimension " + std::to_string(data.dim()) +
                           " does not match stage dim_in " + std::to_string(stage.dim_in));
    }
}

}  // namespace

StageTerms stage_terms(const StageModel& stage, const Dataset& data) {
    check_dims(stage, data);
    const double n = static_cast<double>(stage.num_samples);
    const Matrix post = posteriors(stage, data.vectors);

    double sum1 = 0.0;
    double sum2 = 0.0;
    for (Eigen::Index i = 0; i < data.vectors.rows(); ++i) {
        const auto x = data.vectors.row(i);
        double per_x = 0.0;
        for (Eigen::Index y = 0; y < post.cols(); ++y) {
            per_x += post(i, y) * (x - stage.recon.row(y)).squaredNorm();
        }
        sum1 += data.weights(i) * per_x;
        sum2 += data.weights(i) * (x - post.row(i) * stage.recon).squaredNorm();
    }
    StageTerms t;
    t.d1 = 2.0 / n * sum1;
    t.d2 = 2.0 * (n - 1.0) / n * sum2;
    return t;
}

double d1_stage(const StageModel& stage, const Dataset& data) { return stage_terms(stage, data).d1; }

double d2_stage(const StageModel& stage, const Dataset& data) { return stage_terms(stage, data).d2; }

ObjectiveReport chain_objective(const ChainModel& chain, const Dataset& data) {
    chain.validate();
    ObjectiveReport report;
    Dataset stage_data = data;
    for (std::size_t l = 0; l < chain.size(); ++l) {
        const StageModel& stage = chain.stages[l];
        StageTerms t = stage_terms(stage, stage_data);
        t.weight = chain.stage_weights[l];
        report.d1 += t.weight * t.d1;
        report.d2 += t.weight * t.d2;
        report.per_stage.push_back(t);
        if (l + 1 < chain.size()) stage_data = stage_data.with_vectors(posteriors(stage, stage_data.vectors));
    }
    report.total = report.d1 + report.d2;
    return report;
}

DistortionEstimate estimate_true_D(const StageModel& stage, const Dataset& data,
                                   std::size_t samples_per_x, Rng& rng) {
    check_dims(stage, data);
    if (samples_per_x == 0) throw InvalidInput("samples_per_x must be >= 1");
    const double k = static_cast<double>(samples_per_x);

    double estimate = 0.0;
    double variance = 0.0;
    for (Eigen::Index i = 0; i < data.vectors.rows(); ++i) {
        const Vector x = data.vectors.row(i).transpose();
        const Posterior post = posterior(stage, x);
        // Welford: identical draws give a variance of exactly zero.
        double mean = 0.0;
        double m2 = 0.0;
        for (std::size_t s = 0; s < samples_per_x; ++s) {
            const CodeSample code = sample_code(post, stage.num_samples, rng);
            const double err = 2.0 * (x - reconstruct(stage, code)).squaredNorm();
            const double delta = err - mean;
            mean += delta / static_cast<double>(s + 1);
            m2 += delta * (err - mean);
        }
        const double var = samples_per_x > 1 ? m2 / (k - 1.0) : 0.0;
        const double p = data.weights(i);
        estimate += p * mean;
        variance += p * p * var / k;
    }
    return {estimate, std::sqrt(variance)};
}

Matrix lbg_initial_codebook(const Dataset& data, std::size_t codebook_size, std::uint64_t seed) {
    std::vector<Eigen::Index> order(data.size());
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    Rng rng(seed);
    // Fisher-Yates with the toolkit's portable generator.
    for (std::size_t i = order.size(); i > 1; --i) {
        std::swap(order[i - 1], order[rng.below(i)]);
    }

    Matrix codebook(static_cast<Eigen::Index>(codebook_size), data.vectors.cols());
    Eigen::Index filled = 0;
    for (const Eigen::Index i : order) {
        if (filled == codebook.rows()) break;
        bool seen = false;
        for (Eigen::Index c = 0; c < filled && !seen; ++c) seen = codebook.row(c) == data.vectors.row(i);
        if (!seen) codebook.row(filled++) = data.vectors.row(i);
    }
    if (filled < codebook.rows()) {
        throw InvalidInput("codebook size " + std::to_string(codebook_size) +
                           " exceeds the number of distinct data vectors");
    }
    return codebook;
}

LbgResult lloyd(const Dataset& data, Matrix codebook, std::size_t iterations) {
    if (codebook.cols() != data.vectors.cols()) throw InvalidInput("codebook dimension mismatch");
    if (codebook.rows() == 0) throw InvalidInput("codebook is empty");
    const Eigen::Index n = data.vectors.rows();
    const Eigen::Index m = codebook.rows();
    std::vector<Eigen::Index> cell(static_cast<std::size_t>(n));
    Vector err(n);

    LbgResult result;
    auto assign = [&] {
        double distortion = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            Eigen::Index arg = 0;
            for (Eigen::Index c = 0; c < m; ++c) {
                const double d = (data.vectors.row(i) - codebook.row(c)).squaredNorm();
                if (d < best) {
                    best = d;
                    arg = c;
                }
            }
            cell[static_cast<std::size_t>(i)] = arg;
            err(i) = best;
            distortion += data.weights(i) * best;
        }
        return distortion;
    };

    for (std::size_t it = 0; it < iterations; ++it) {
        result.history.push_back(assign());
        Matrix sums = Matrix::Zero(m, codebook.cols());
        Vector mass = Vector::Zero(m);
        for (Eigen::Index i = 0; i < n; ++i) {
            const Eigen::Index c = cell[static_cast<std::size_t>(i)];
            sums.row(c) += data.weights(i) * data.vectors.row(i);
            mass(c) += data.weights(i);
        }
        for (Eigen::Index c = 0; c < m; ++c) {
            if (mass(c) > 0.0) {
                codebook.row(c) = sums.row(c) / mass(c);
            } else {
                Eigen::Index worst = 0;
                err.maxCoeff(&worst);
                codebook.row(c) = data.vectors.row(worst);
                err(worst) = 0.0;
            }
        }
    }
    result.distortion = assign();
    result.history.push_back(result.distortion);
    result.codebook = std::move(codebook);
    return result;
}

LbgResult lbg_baseline(const Dataset& data, std::size_t codebook_size, std::size_t iterations,
                       std::uint64_t seed) {
    return lloyd(data, lbg_initial_codebook(data, codebook_size, seed), iterations);
}

void write_report_csv_header(std::ostream& out, std::size_t num_stages) {
    out << "step";
    for (std::size_t l = 1; l <= num_stages; ++l) {
        out << ",d1_" << l << ",d2_" << l << ",s_" << l;
    }
    out << ",total\n";
}

void write_report_csv_row(std::ostream& out, std::size_t step, const ObjectiveReport& report) {
    out << step;
    for (const StageTerms& t : report.per_stage) {
        out << ',' << format_exact(t.d1) << ',' << format_exact(t.d2) << ',' << format_exact(t.weight);
    }
    out << ',' << format_exact(report.total) << '\n';
}

}  // namespace svq

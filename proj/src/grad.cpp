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
#include "svq/grad.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

#include "svq/objective.hpp"

namespace svq {

StageGradient StageGradient::zeros_like(const StageModel& stage) {
    return {Matrix::Zero(stage.weights.rows(), stage.weights.cols()), Vector::Zero(stage.biases.size()),
            Matrix::Zero(stage.recon.rows(), stage.recon.cols())};
}

LocalGradient stage_gradient_local(const StageModel& stage, const Dataset& data, double weight,
                                   const std::optional<Matrix>& upstream) {
    stage.validate();
    if (data.dim() != stage.dim_in) throw InvalidInput("dataset dimension does not match stage");
    const Eigen::Index rows = data.vectors.rows();
    const Eigen::Index m = static_cast<Eigen::Index>(stage.codebook_size);
    if (upstream && (upstream->rows() != rows || upstream->cols() != m)) {
        throw InvalidInput("upstream sensitivity must be N x M");
    }

    const double n = static_cast<double>(stage.num_samples);
    const double c1 = 2.0 / n;
    const double c2 = 2.0 * (n - 1.0) / n;

    Matrix act = data.vectors * stage.weights.transpose();
    act.rowwise() += stage.biases.transpose();
    const Matrix post = posteriors(stage, data.vectors);

    LocalGradient out{StageGradient::zeros_like(stage), Matrix::Zero(rows, data.vectors.cols())};
    StageGradient& g = out.grad;
    Vector g_post(m);
    Vector g_act(m);

    for (Eigen::Index i = 0; i < rows; ++i) {
        const auto x = data.vectors.row(i);
        const auto p = post.row(i);
        const double scale = weight * data.weights(i);
        const Eigen::RowVectorXd residual = x - p * stage.recon;

        // Derivative w.r.t. Pr(y|x) treated as free, then w.r.t. the reconstruction vectors.
        for (Eigen::Index y = 0; y < m; ++y) {
            const auto r = stage.recon.row(y);
            g_post(y) = scale * (c1 * (x - r).squaredNorm() - 2.0 * c2 * residual.dot(r));
            if (upstream) g_post(y) += (*upstream)(i, y);
            g.g_recon.row(y) -= (2.0 * scale * p(y)) * (c1 * (x - r) + c2 * residual);
        }

        // Through the normalisation and the sigmoid:
        // dPr(y|x)/da(k) = Pr(k|x) (1 - Q(k|x)) (delta_yk - Pr(y|x)).
        const double mean_g = p.dot(g_post);
        for (Eigen::Index k = 0; k < m; ++k) {
            g_act(k) = p(k) * sigmoid(-act(i, k)) * (g_post(k) - mean_g);
        }

        // D1 and D2 also depend on x directly: 2 c1 sum_y Pr(y|x)(x - x'(y)) + 2 c2 residual.
        out.input_sensitivity.row(i) = (2.0 * scale * (c1 + c2)) * residual;
        for (Eigen::Index k = 0; k < m; ++k) {
            g.g_w.row(k) += g_act(k) * x;
            g.g_b(k) += g_act(k);
            out.input_sensitivity.row(i) += g_act(k) * stage.weights.row(k);
        }
    }
    return out;
}

ChainGradient chain_gradient(const ChainModel& chain, const Dataset& data) {
    const std::vector<Matrix> outputs = chain_forward(chain, data.vectors);
    const std::size_t stages = chain.size();

    ChainGradient result;
    result.per_stage.resize(stages);
    std::optional<Matrix> upstream;
    for (std::size_t l = stages; l-- > 0;) {
        const Dataset stage_data = l == 0 ? data : data.with_vectors(outputs[l - 1]);
        LocalGradient local =
            stage_gradient_local(chain.stages[l], stage_data, chain.stage_weights[l], upstream);
        result.per_stage[l] = std::move(local.grad);
        upstream = std::move(local.input_sensitivity);
    }
    return result;
}

double relative_error(double analytic, double numeric, double abs_floor) {
    const double denom = std::max({std::abs(analytic), std::abs(numeric), abs_floor});
    return std::abs(analytic - numeric) / denom;
}

namespace {

// Central difference of the chain objective with respect to one scalar parameter.
template <typename Access>
double central_difference(ChainModel& chain, const Dataset& data, double step, Access&& param) {
    double& v = param(chain);
    const double saved = v;
    v = saved + step;
    const double plus = chain_objective(chain, data).total;
    v = saved - step;
    const double minus = chain_objective(chain, data).total;
    v = saved;
    return (plus - minus) / (2.0 * step);
}

}  // namespace

FdCheckReport finite_difference_check(const ChainModel& chain, const Dataset& data,
                                      const ChainGradient& analytic, double step, double tolerance,
                                      double abs_floor) {
    if (!(step > 0.0)) throw InvalidInput("finite-difference step must be positive");
    chain.validate();
    if (analytic.per_stage.size() != chain.size()) throw InvalidInput("gradient has wrong stage count");

    ChainModel work = chain;
    FdCheckReport report;
    for (std::size_t l = 0; l < chain.size(); ++l) {
        const StageModel& st = chain.stages[l];
        const StageGradient& g = analytic.per_stage[l];
        FdCheckEntry ew{l + 1, "w", 0.0};
        FdCheckEntry eb{l + 1, "b", 0.0};
        FdCheckEntry ex{l + 1, "x", 0.0};
        for (Eigen::Index y = 0; y < st.weights.rows(); ++y) {
            for (Eigen::Index j = 0; j < st.weights.cols(); ++j) {
                const double nw = central_difference(
                    work, data, step, [&](ChainModel& c) -> double& { return c.stages[l].weights(y, j); });
                ew.max_rel_error = std::max(ew.max_rel_error, relative_error(g.g_w(y, j), nw, abs_floor));
                const double nx = central_difference(
                    work, data, step, [&](ChainModel& c) -> double& { return c.stages[l].recon(y, j); });
                ex.max_rel_error = std::max(ex.max_rel_error, relative_error(g.g_recon(y, j), nx, abs_floor));
            }
            const double nb = central_difference(
                work, data, step, [&](ChainModel& c) -> double& { return c.stages[l].biases(y); });
            eb.max_rel_error = std::max(eb.max_rel_error, relative_error(g.g_b(y), nb, abs_floor));
        }
        for (const auto& e : {ew, eb, ex}) {
            report.worst = std::max(report.worst, e.max_rel_error);
            report.entries.push_back(e);
        }
    }
    report.passed = report.worst < tolerance;
    return report;
}

FdCheckReport finite_difference_check(const ChainModel& chain, const Dataset& data, double step,
                                      double tolerance) {
    return finite_difference_check(chain, data, chain_gradient(chain, data), step, tolerance);
}

void print_fd_report(std::ostream& out, const FdCheckReport& report) {
    out << "stage  kind  max_rel_error\n";
    for (const FdCheckEntry& e : report.entries) {
        out << std::setw(5) << e.stage << "  " << std::setw(4) << e.kind << "  " << std::scientific
            << std::setprecision(3) << e.max_rel_error << '\n';
    }
    out << "worst " << std::scientific << std::setprecision(3) << report.worst << "  "
        << (report.passed ? "PASS" : "FAIL") << '\n';
    out.unsetf(std::ios::floatfield);
}

}  // namespace svq

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
#include <doctest.h>

#include <cmath>
#include <functional>
#include <sstream>

#include "helpers.hpp"
#include "svq/grad.hpp"
#include "svq/objective.hpp"

using namespace svq;
using svq::testing::random_chain;
using svq::testing::random_data;
using svq::testing::random_stage;

namespace {

// Central differences of chain_objective, written out here rather than taken from the library.
double worst_fd_error(const ChainModel& chain, const Dataset& data, const ChainGradient& g, double h = 1e-5) {
    double worst = 0.0;
    auto probe = [&](const std::function<double&(ChainModel&)>& ref, double analytic) {
        ChainModel plus = chain;
        ChainModel minus = chain;
        ref(plus) += h;
        ref(minus) -= h;
        const double numeric = (chain_objective(plus, data).total - chain_objective(minus, data).total) / (2.0 * h);
        worst = std::max(worst, std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), 1e-8}));
    };
    for (std::size_t l = 0; l < chain.size(); ++l) {
        const StageModel& s = chain.stages[l];
        for (Eigen::Index y = 0; y < s.weights.rows(); ++y) {
            for (Eigen::Index k = 0; k < s.weights.cols(); ++k) {
                probe([&](ChainModel& c) -> double& { return c.stages[l].weights(y, k); }, g.per_stage[l].g_w(y, k));
                probe([&](ChainModel& c) -> double& { return c.stages[l].recon(y, k); }, g.per_stage[l].g_recon(y, k));
            }
            probe([&](ChainModel& c) -> double& { return c.stages[l].biases(y); }, g.per_stage[l].g_b(y));
        }
    }
    return worst;
}

}  // namespace

TEST_CASE("stage gradient: zero residual kills the reconstruction gradient") {
    StageModel s = random_stage(3, 4, 2, 1);
    Matrix x(1, 3);
    x << 0.2, -0.4, 0.9;
    for (Eigen::Index y = 0; y < 4; ++y) s.recon.row(y) = x.row(0);
    const LocalGradient g = stage_gradient_local(s, Dataset(x));
    CHECK(g.grad.g_recon.cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("stage gradient: symmetric configuration gives equal bias gradients") {
    StageModel s(2, 2, 3);
    Matrix x(1, 2);
    x << 1.0, -1.0;
    s.recon.row(0) = x.row(0) + Eigen::RowVector2d(0.5, 0.25);
    s.recon.row(1) = x.row(0) - Eigen::RowVector2d(0.5, 0.25);
    const LocalGradient g = stage_gradient_local(s, Dataset(x));
    CHECK(g.grad.g_b(0) == doctest::Approx(g.grad.g_b(1)).epsilon(1e-14));
}

TEST_CASE("stage gradient: finite differences, d=5 M=4 n=3") {
    ChainModel c;
    c.stages.push_back(random_stage(5, 4, 3, 42));
    c.stage_weights = {1.0};
    const Dataset data = random_data(7, 5, 43);
    const ChainGradient g = chain_gradient(c, data);
    CHECK(worst_fd_error(c, data, g) < 1e-5);

    const LocalGradient local = stage_gradient_local(c.stages[0], data);
    CHECK(local.grad.g_w == g.per_stage[0].g_w);
    CHECK(local.grad.g_b == g.per_stage[0].g_b);
    CHECK(local.grad.g_recon == g.per_stage[0].g_recon);
    CHECK(local.input_sensitivity.rows() == 7);
    CHECK(local.input_sensitivity.cols() == 5);
}

TEST_CASE("stage gradient: input sensitivity matches finite differences") {
    const StageModel s = random_stage(4, 3, 2, 8);
    const Dataset data = random_data(5, 4, 9, true);
    const LocalGradient g = stage_gradient_local(s, data, 1.5);
    const double h = 1e-6;
    for (Eigen::Index i = 0; i < 5; ++i) {
        for (Eigen::Index k = 0; k < 4; ++k) {
            Matrix plus = data.vectors;
            Matrix minus = data.vectors;
            plus(i, k) += h;
            minus(i, k) -= h;
            const double numeric = 1.5 * (stage_terms(s, data.with_vectors(plus)).d1 + stage_terms(s, data.with_vectors(plus)).d2 -
                                          stage_terms(s, data.with_vectors(minus)).d1 - stage_terms(s, data.with_vectors(minus)).d2) /
                                   (2.0 * h);
            CHECK(relative_error(g.input_sensitivity(i, k), numeric) < 1e-5);
        }
    }
}

TEST_CASE("chain gradient: finite differences, d=6 M=(4,3) n=(3,2)") {
    const ChainModel c = random_chain(6, {4, 3}, {3, 2}, 5);
    const Dataset data = random_data(8, 6, 6);
    CHECK(worst_fd_error(c, data, chain_gradient(c, data)) < 1e-5);
}

TEST_CASE("chain gradient: zero weight on the second stage") {
    ChainModel c = random_chain(4, {3, 3}, {2, 2}, 12);
    c.stage_weights = {1.0, 0.0};
    const Dataset data = random_data(6, 4, 13);
    const ChainGradient g = chain_gradient(c, data);
    CHECK(g.per_stage[1].g_w.cwiseAbs().maxCoeff() == 0.0);
    CHECK(g.per_stage[1].g_b.cwiseAbs().maxCoeff() == 0.0);
    CHECK(g.per_stage[1].g_recon.cwiseAbs().maxCoeff() == 0.0);
    const LocalGradient local = stage_gradient_local(c.stages[0], data);
    CHECK((g.per_stage[0].g_w - local.grad.g_w).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((g.per_stage[0].g_b - local.grad.g_b).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("gradient linearity in the stage weight") {
    const StageModel s = random_stage(3, 4, 3, 14);
    const Dataset data = random_data(6, 3, 15);
    const LocalGradient a = stage_gradient_local(s, data, 1.0);
    const LocalGradient b = stage_gradient_local(s, data, 2.5);
    CHECK((b.grad.g_w - 2.5 * a.grad.g_w).cwiseAbs().maxCoeff() < 1e-13);
    CHECK((b.grad.g_b - 2.5 * a.grad.g_b).cwiseAbs().maxCoeff() < 1e-13);
    CHECK((b.grad.g_recon - 2.5 * a.grad.g_recon).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("reconstruction stationarity at posterior-weighted centroids (n = 1)") {
    StageModel s = random_stage(3, 4, 1, 16, 8.0);
    const Dataset data = random_data(20, 3, 17, true);
    const Matrix post = posteriors(s, data.vectors);
    for (Eigen::Index y = 0; y < 4; ++y) {
        const Vector pw = post.col(y).cwiseProduct(data.weights);
        s.recon.row(y) = (data.vectors.transpose() * pw / pw.sum()).transpose();
    }
    CHECK(stage_gradient_local(s, data).grad.g_recon.cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("gradient is deterministic") {
    const ChainModel c = random_chain(5, {4, 3}, {2, 2}, 18);
    const Dataset data = random_data(9, 5, 19);
    const ChainGradient a = chain_gradient(c, data);
    const ChainGradient b = chain_gradient(c, data);
    for (std::size_t l = 0; l < 2; ++l) {
        CHECK(a.per_stage[l].g_w == b.per_stage[l].g_w);
        CHECK(a.per_stage[l].g_b == b.per_stage[l].g_b);
        CHECK(a.per_stage[l].g_recon == b.per_stage[l].g_recon);
    }
}

TEST_CASE("finite_difference_check: 10 seeded configurations") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Rng pick(seed);
        const std::size_t d = 2 + pick.below(7);
        const bool two = seed % 2 == 0;
        std::vector<std::size_t> M{2 + pick.below(5)};
        std::vector<std::size_t> n{1 + pick.below(4)};
        if (two) {
            M.push_back(2 + pick.below(5));
            n.push_back(1 + pick.below(4));
        }
        const ChainModel c = random_chain(d, M, n, seed + 50);
        const FdCheckReport r = finite_difference_check(c, random_data(1 + pick.below(10), d, seed + 60));
        CHECK(r.passed);
        CHECK(r.worst < 1e-4);
        CHECK(r.entries.size() == 3 * c.size());
    }
}

TEST_CASE("finite_difference_check: stationary configuration") {
    StageModel s(2, 3, 2);
    Matrix x(4, 2);
    x << 1, 0, -1, 0, 0, 1, 0, -1;
    ChainModel c;
    c.stages.push_back(s);  // w = 0, b = 0, all recon at the data mean (origin)
    c.stage_weights = {1.0};
    const Dataset data(x);
    const ChainGradient g = chain_gradient(c, data);
    CHECK(g.per_stage[0].g_recon.cwiseAbs().maxCoeff() < 1e-15);
    ChainGradient zero = g;
    zero.per_stage[0].g_recon.setZero();
    const FdCheckReport r = finite_difference_check(c, data, zero);
    CHECK(r.passed);
}

TEST_CASE("finite_difference_check: corrupted gradient fails") {
    const ChainModel c = random_chain(4, {3, 2}, {2, 3}, 77);
    const Dataset data = random_data(6, 4, 78);
    ChainGradient g = chain_gradient(c, data);
    CHECK(finite_difference_check(c, data, g).passed);
    g.per_stage[0].g_w(1, 2) += 1.0;
    const FdCheckReport bad = finite_difference_check(c, data, g);
    CHECK_FALSE(bad.passed);
    CHECK(bad.worst > 1e-2);

    std::ostringstream os;
    print_fd_report(os, bad);
    CHECK(os.str().find("FAIL") != std::string::npos);
    CHECK_THROWS_AS(finite_difference_check(c, data, g, 0.0), InvalidInput);
}

TEST_CASE("relative_error floor") {
    CHECK(relative_error(0.0, 1e-10) == doctest::Approx(1e-2));
    CHECK(relative_error(2.0, 1.0) == doctest::Approx(0.5));
}

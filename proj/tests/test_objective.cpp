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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "helpers.hpp"
#include "oracles.hpp"
#include "svq/objective.hpp"

using namespace svq;
using svq::testing::random_chain;
using svq::testing::random_data;
using svq::testing::random_stage;
using svq::oracles::enumerated_D;
using svq::oracles::four_blobs;
using svq::oracles::reference_lloyd;

namespace {

// Independent double-loop evaluation straight from Q(y|x).
std::pair<double, double> brute_force_terms(const StageModel& s, const Dataset& data) {
    const double n = static_cast<double>(s.num_samples);
    double d1 = 0.0;
    double d2 = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const Vector x = data.vectors.row(static_cast<Eigen::Index>(i)).transpose();
        std::vector<double> q;
        for (std::size_t y = 1; y <= s.codebook_size; ++y) q.push_back(q_unnormalised(s, x, y));
        const double z = std::accumulate(q.begin(), q.end(), 0.0);
        Vector mean = Vector::Zero(x.size());
        double e1 = 0.0;
        for (std::size_t y = 0; y < q.size(); ++y) {
            double sq = 0.0;
            for (Eigen::Index k = 0; k < x.size(); ++k) {
                const double diff = x(k) - s.recon(static_cast<Eigen::Index>(y), k);
                sq += diff * diff;
                mean(k) += q[y] / z * s.recon(static_cast<Eigen::Index>(y), k);
            }
            e1 += q[y] / z * sq;
        }
        const double w = data.weights(static_cast<Eigen::Index>(i));
        d1 += w * e1;
        d2 += w * (x - mean).squaredNorm();
    }
    return {2.0 / n * d1, 2.0 * (n - 1.0) / n * d2};
}

}  // namespace

TEST_CASE("Dataset: weights") {
    CHECK_THROWS_AS(Dataset(Matrix(0, 2)), InvalidInput);
    Matrix x(2, 1);
    x << 0.0, 2.0;
    Vector w(2);
    w << 0.3, 0.6;
    CHECK_THROWS_AS(Dataset(x, w), InvalidInput);
    w << -0.5, 1.5;
    CHECK_THROWS_AS(Dataset(x, w), InvalidInput);
    w << 0.25, 0.75;
    CHECK(Dataset(x, w).mean()(0) == doctest::Approx(1.5));
    CHECK(Dataset(x).weights(1) == 0.5);
}

TEST_CASE("d1_stage and d2_stage: trivial cases") {
    StageModel s(2, 3, 4);
    Matrix one(1, 2);
    one << 0.5, -1.0;
    for (Eigen::Index y = 0; y < 3; ++y) s.recon.row(y) = one.row(0);
    const Dataset d(one);
    CHECK(d1_stage(s, d) == 0.0);
    CHECK(d2_stage(s, d) == 0.0);

    StageModel m1(2, 1, 5);
    m1.recon.row(0) = one.row(0) + Eigen::RowVector2d(0.3, -0.4);
    CHECK(d1_stage(m1, d) == doctest::Approx(2.0 / 5.0 * 0.25).epsilon(1e-14));

    const StageModel r = random_stage(4, 5, 1, 3);
    CHECK(d2_stage(r, random_data(10, 4, 4)) == 0.0);
}

TEST_CASE("d1_stage and d2_stage: brute-force oracle") {
    for (const std::size_t n : {1, 3, 20}) {
        const StageModel s = random_stage(5, 6, n, 10 + n);
        const Dataset data = random_data(10, 5, 20 + n, true);
        const auto [b1, b2] = brute_force_terms(s, data);
        CHECK(std::abs(d1_stage(s, data) - b1) <= 1e-12 * std::abs(b1));
        if (n > 1) CHECK(std::abs(d2_stage(s, data) - b2) <= 1e-12 * std::abs(b2));
        const StageTerms t = stage_terms(s, data);
        CHECK(t.d1 == d1_stage(s, data));
        CHECK(t.d2 == d2_stage(s, data));
    }
    CHECK_THROWS_AS(d1_stage(random_stage(3, 2, 1, 1), random_data(4, 4, 1)), InvalidInput);
}

TEST_CASE("d1/d2: permutation invariance") {
    const StageModel s = random_stage(3, 4, 3, 7);
    const Dataset data = random_data(12, 3, 8, true);
    std::vector<Eigen::Index> order(12);
    std::iota(order.begin(), order.end(), 0);
    std::reverse(order.begin(), order.end());
    std::swap(order[2], order[9]);
    Matrix x(12, 3);
    Vector w(12);
    for (Eigen::Index i = 0; i < 12; ++i) {
        x.row(i) = data.vectors.row(order[static_cast<std::size_t>(i)]);
        w(i) = data.weights(order[static_cast<std::size_t>(i)]);
    }
    const Dataset shuffled(x, w);
    CHECK(d1_stage(s, shuffled) == doctest::Approx(d1_stage(s, data)).epsilon(1e-13));
    CHECK(d2_stage(s, shuffled) == doctest::Approx(d2_stage(s, data)).epsilon(1e-13));
}

TEST_CASE("chain_objective") {
    ChainModel one = random_chain(4, {3}, {2}, 2);
    one.stage_weights = {1.0};
    const Dataset data = random_data(9, 4, 3);
    const ObjectiveReport r1 = chain_objective(one, data);
    CHECK(r1.total == doctest::Approx(d1_stage(one.stages[0], data) + d2_stage(one.stages[0], data)).epsilon(1e-14));

    ChainModel two = random_chain(4, {3, 5}, {2, 3}, 2);
    two.stages[0] = one.stages[0];
    two.stage_weights = {1.0, 0.0};
    CHECK(chain_objective(two, data).total == doctest::Approx(r1.total).epsilon(1e-14));

    two.stage_weights = {0.7, 1.9};
    const ObjectiveReport r2 = chain_objective(two, data);
    const Matrix p1 = posteriors(two.stages[0], data.vectors);
    const Dataset next = data.with_vectors(p1);
    const double manual = 0.7 * (d1_stage(two.stages[0], data) + d2_stage(two.stages[0], data)) +
                          1.9 * (d1_stage(two.stages[1], next) + d2_stage(two.stages[1], next));
    CHECK(std::abs(r2.total - manual) <= 1e-12 * manual);
    REQUIRE(r2.per_stage.size() == 2);
    double sum = 0.0;
    for (const auto& t : r2.per_stage) sum += t.weight * (t.d1 + t.d2);
    CHECK(std::abs(r2.total - sum) <= 1e-10 * sum);
    CHECK(r2.total == doctest::Approx(r2.d1 + r2.d2).epsilon(1e-15));

    ChainModel scaled = two;
    for (double& s : scaled.stage_weights) s *= 3.0;
    CHECK(chain_objective(scaled, data).total == doctest::Approx(3.0 * r2.total).epsilon(1e-14));
}

TEST_CASE("estimate_true_D: M = 1 and n = 1") {
    StageModel m1 = random_stage(3, 1, 4, 5);
    const Dataset data = random_data(6, 3, 6);
    Rng rng(1);
    const DistortionEstimate e = estimate_true_D(m1, data, 50, rng);
    double exact = 0.0;
    for (Eigen::Index i = 0; i < 6; ++i) exact += data.weights(i) * 2.0 * (data.vectors.row(i) - m1.recon.row(0)).squaredNorm();
    CHECK(e.mean == doctest::Approx(exact).epsilon(1e-13));
    CHECK(e.std_error == 0.0);

    const StageModel n1 = random_stage(3, 5, 1, 7);
    const DistortionEstimate f = estimate_true_D(n1, data, 20000, rng);
    CHECK(std::abs(f.mean - d1_stage(n1, data)) < 4.0 * f.std_error);
}

TEST_CASE("estimate_true_D: exact enumeration of 64 code vectors") {
    const StageModel s = random_stage(2, 4, 3, 31, 2.0);
    const Dataset data = random_data(5, 2, 32);
    const double exact = enumerated_D(s, data);
    Rng rng(3);
    const DistortionEstimate e = estimate_true_D(s, data, 20000, rng);
    CHECK(e.std_error > 0.0);
    CHECK(std::abs(e.mean - exact) < 4.0 * e.std_error);
    CHECK(exact <= d1_stage(s, data) + d2_stage(s, data) + 1e-10);
}

TEST_CASE("bound property: 20 seeded stages") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        Rng pick(seed);
        const std::size_t d = 1 + pick.below(6);
        const std::size_t M = 1 + pick.below(6);
        const std::size_t n = 1 + pick.below(4);
        const StageModel s = random_stage(d, M, n, seed + 100, 2.0);
        const Dataset data = random_data(8, d, seed + 200);
        Rng rng(seed);
        const DistortionEstimate e = estimate_true_D(s, data, 2000, rng);
        CHECK(e.mean <= d1_stage(s, data) + d2_stage(s, data) + 4.0 * e.std_error);
    }
}

TEST_CASE("lbg_baseline: trivial cases") {
    Matrix x(2, 1);
    x << 0.0, 2.0;
    const LbgResult r = lbg_baseline(Dataset(x), 1, 10);
    CHECK(r.codebook(0, 0) == doctest::Approx(1.0));
    CHECK(r.distortion == doctest::Approx(1.0));

    const Dataset d = random_data(7, 3, 4);
    CHECK(lbg_baseline(d, 7, 5, 3).distortion == doctest::Approx(0.0).epsilon(1e-15));

    Matrix dup(3, 1);
    dup << 1.0, 1.0, 1.0;
    CHECK_THROWS_AS(lbg_baseline(Dataset(dup), 2, 5), InvalidInput);
}

TEST_CASE("lbg_baseline: matches an independent Lloyd implementation") {
    const Dataset data = four_blobs(5, 25);
    const Matrix init = lbg_initial_codebook(data, 4, 9);
    const LbgResult r = lloyd(data, init, 20);
    CHECK(std::abs(r.distortion - reference_lloyd(data, init, 20)) < 1e-10);
    for (std::size_t k = 1; k < r.history.size(); ++k) CHECK(r.history[k] <= r.history[k - 1] + 1e-15);

    // Same seed, same initial codebook.
    CHECK(lbg_initial_codebook(data, 4, 9) == init);
    const LbgResult b = lbg_baseline(data, 4, 20, 9);
    CHECK(b.distortion == r.distortion);
}

TEST_CASE("lloyd: empty cell is re-seeded with the worst-coded vector") {
    Matrix x(4, 1);
    x << 0.0, 1.0, 10.0, 11.0;
    Matrix code(2, 1);
    code << 0.5, 100.0;  // second code vector starts with an empty cell
    const LbgResult r = lloyd(Dataset(x), code, 5);
    CHECK(r.distortion == doctest::Approx(0.25));
    for (std::size_t k = 1; k < r.history.size(); ++k) CHECK(r.history[k] <= r.history[k - 1] + 1e-15);
}

TEST_CASE("report CSV") {
    ChainModel c = random_chain(3, {2, 2}, {1, 2}, 4);
    const ObjectiveReport r = chain_objective(c, random_data(4, 3, 1));
    std::ostringstream os;
    write_report_csv_header(os, 2);
    write_report_csv_row(os, 7, r);
    const std::string text = os.str();
    CHECK(text.rfind("step,d1_1,d2_1,s_1,d1_2,d2_2,s_2,total\n7,", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), ',') == 14);
}

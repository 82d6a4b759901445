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

#include "helpers.hpp"
#include "svq/core.hpp"

using namespace svq;
using svq::testing::random_chain;
using svq::testing::random_stage;
using svq::testing::random_vector;

TEST_CASE("q_unnormalised: sigmoid values") {
    StageModel s(2, 1, 1);
    CHECK(q_unnormalised(s, Vector::Zero(2), 1) == 0.5);

    s.weights.row(0) << 2.0, 5.0;
    s.biases(0) = -1.0;
    Vector x(2);
    x << 1.0, 0.0;
    CHECK(q_unnormalised(s, x, 1) == doctest::Approx(0.7310585786300049).epsilon(1e-15));

    s.biases(0) = 40.0;
    s.weights.setZero();
    CHECK(q_unnormalised(s, x, 1) >= 1.0 - 1e-12);
    s.biases(0) = 30.0;
    CHECK(q_unnormalised(s, x, 1) < 1.0);
}

TEST_CASE("sigmoid: stable at extreme arguments") {
    CHECK(sigmoid(-800.0) >= 0.0);
    CHECK(std::isfinite(sigmoid(-800.0)));
    CHECK(sigmoid(800.0) == 1.0);
    CHECK(sigmoid(-30.0) == doctest::Approx(std::exp(-30.0) / (1.0 + std::exp(-30.0))).epsilon(1e-14));
    double prev = 0.0;
    for (double a = -50.0; a <= 50.0; a += 0.25) {
        CHECK(sigmoid(a) >= prev);
        prev = sigmoid(a);
    }
}

TEST_CASE("q_unnormalised: bad arguments") {
    StageModel s(3, 2, 1);
    CHECK_THROWS_AS(q_unnormalised(s, Vector::Zero(2), 1), InvalidInput);
    CHECK_THROWS_AS(q_unnormalised(s, Vector::Zero(3), 0), InvalidInput);
    CHECK_THROWS_AS(q_unnormalised(s, Vector::Zero(3), 3), InvalidInput);
}

TEST_CASE("posterior: uniform, explicit and quotient oracle") {
    StageModel s(3, 4, 1);
    const Posterior u = posterior(s, Vector::Ones(3));
    for (int y = 0; y < 4; ++y) CHECK(u.probs(y) == doctest::Approx(0.25).epsilon(1e-15));

    // Q = (0.5, 0.25) from biases 0 and logit(0.25).
    StageModel t(1, 2, 1);
    t.biases(1) = std::log(0.25 / 0.75);
    const Posterior p = posterior(t, Vector::Zero(1));
    CHECK(p.probs(0) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(p.probs(1) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

    const StageModel r = random_stage(5, 3, 2, 17);
    Rng rng(5);
    const Vector x = random_vector(5, rng);
    const Posterior q = posterior(r, x);
    double total = 0.0;
    for (std::size_t y = 1; y <= 3; ++y) total += q_unnormalised(r, x, y);
    for (std::size_t y = 1; y <= 3; ++y) {
        CHECK(std::abs(q.probs(static_cast<Eigen::Index>(y - 1)) - q_unnormalised(r, x, y) / total) < 1e-14);
    }
    CHECK_THROWS_AS(posterior(r, Vector::Zero(4)), InvalidInput);
}

TEST_CASE("posterior: normalisation over 1000 seeded stages") {
    double worst = 0.0;
    double smallest = 1.0;
    for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
        Rng rng(seed);
        const auto d = 1 + rng.below(8);
        const auto M = 1 + rng.below(16);
        const StageModel s = random_stage(d, M, 1, seed, 5.0);
        const Posterior p = posterior(s, random_vector(static_cast<Eigen::Index>(d), rng, -3.0, 3.0));
        worst = std::max(worst, std::abs(p.probs.sum() - 1.0));
        smallest = std::min(smallest, p.probs.minCoeff());
    }
    CHECK(worst < 1e-12);
    CHECK(smallest > 0.0);
}

TEST_CASE("posterior: saturated logits stay normalised") {
    StageModel s(1, 3, 1);
    s.biases << -900.0, -950.0, -1000.0;
    const Posterior p = posterior(s, Vector::Zero(1));
    CHECK(std::abs(p.probs.sum() - 1.0) < 1e-12);
    CHECK(p.probs(0) > 0.99);
}

TEST_CASE("sample_code: degenerate, frequency and determinism") {
    Posterior point{Vector::Zero(4)};
    point.probs(0) = 1.0;
    Rng rng(1);
    for (const std::size_t y : sample_code(point, 50, rng).indices) CHECK(y == 1);

    // Tiny negative rounding noise is clamped away.
    Posterior noisy{Vector::Zero(3)};
    noisy.probs << -1e-17, 1.0, 1e-17;
    for (const std::size_t y : sample_code(noisy, 20, rng).indices) CHECK(y != 1);

    const Posterior uniform{Vector::Constant(16, 1.0 / 16.0)};
    std::vector<double> counts(16, 0.0);
    Rng r2(2);
    const std::size_t draws = 100000;
    for (std::size_t k = 0; k < draws / 20; ++k) {
        const CodeSample s = sample_code(uniform, 20, r2);
        REQUIRE(s.indices.size() == 20);
        for (const std::size_t y : s.indices) counts[y - 1] += 1.0;
    }
    const double p = 1.0 / 16.0;
    const double sd = std::sqrt(draws * p * (1 - p));
    for (const double c : counts) CHECK(std::abs(c - draws * p) < 4.0 * sd);

    Rng a(99);
    Rng b(99);
    const Posterior q{Vector::LinSpaced(5, 1.0, 5.0) / 15.0};
    CHECK(sample_code(q, 30, a).indices == sample_code(q, 30, b).indices);
}

TEST_CASE("reconstruct: mean of selected vectors") {
    StageModel s(2, 2, 2);
    s.recon << 0.0, 0.0, 2.0, 4.0;
    const Vector m = reconstruct(s, CodeSample{{1, 2}});
    CHECK(m(0) == 1.0);
    CHECK(m(1) == 2.0);
    CHECK(reconstruct(s, CodeSample{{2, 2}}) == s.recon.row(1).transpose());

    const StageModel r = random_stage(4, 8, 3, 3);
    const Vector oracle = (2.0 * r.recon.row(2) + r.recon.row(6)).transpose() / 3.0;
    CHECK((reconstruct(r, CodeSample{{3, 3, 7}}) - oracle).cwiseAbs().maxCoeff() < 1e-14);

    CHECK_THROWS_AS(reconstruct(s, CodeSample{{0}}), InvalidInput);
    CHECK_THROWS_AS(reconstruct(s, CodeSample{{3}}), InvalidInput);
}

TEST_CASE("reconstruct: stays in the convex hull") {
    const StageModel r = random_stage(3, 5, 4, 11);
    Rng rng(4);
    for (int t = 0; t < 200; ++t) {
        const Posterior p = posterior(r, random_vector(3, rng));
        const CodeSample s = sample_code(p, 4, rng);
        const Vector v = reconstruct(r, s);
        for (Eigen::Index k = 0; k < 3; ++k) {
            double lo = 1e300;
            double hi = -1e300;
            for (const std::size_t y : s.indices) {
                lo = std::min(lo, r.recon(static_cast<Eigen::Index>(y - 1), k));
                hi = std::max(hi, r.recon(static_cast<Eigen::Index>(y - 1), k));
            }
            CHECK(v(k) >= lo - 1e-15);
            CHECK(v(k) <= hi + 1e-15);
        }
    }
}

TEST_CASE("expected_reconstruction") {
    StageModel s(2, 2, 1);
    s.recon << 0.0, 0.0, 1.0, 1.0;
    const Vector e = expected_reconstruction(s, Vector::Zero(2));
    CHECK(e(0) == doctest::Approx(0.5));
    CHECK(e(1) == doctest::Approx(0.5));

    StageModel sharp(1, 3, 1);
    sharp.biases << -60.0, 60.0, -60.0;
    sharp.recon << 1.0, 7.0, 3.0;
    CHECK(expected_reconstruction(sharp, Vector::Zero(1))(0) == doctest::Approx(7.0).epsilon(1e-12));

    const StageModel r = random_stage(6, 4, 2, 21);
    Rng rng(8);
    const Vector x = random_vector(6, rng);
    const Posterior p = posterior(r, x);
    Vector oracle = Vector::Zero(6);
    for (Eigen::Index y = 0; y < 4; ++y)
        for (Eigen::Index k = 0; k < 6; ++k) oracle(k) += p.probs(y) * r.recon(y, k);
    CHECK((expected_reconstruction(r, x) - oracle).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("chain_forward: composition") {
    ChainModel one;
    one.stages.push_back(random_stage(3, 4, 1, 5));
    one.stage_weights = {1.0};
    Rng rng(6);
    const Vector x = random_vector(3, rng);
    const auto single = chain_forward(one, x);
    REQUIRE(single.size() == 1);
    CHECK(single[0].probs == posterior(one.stages[0], x).probs);

    ChainModel two = random_chain(3, {4, 5}, {2, 2}, 8);
    two.stages[1].weights.setZero();
    two.stages[1].biases.setZero();
    for (int t = 0; t < 5; ++t) {
        const auto out = chain_forward(two, random_vector(3, rng));
        for (Eigen::Index y = 0; y < 5; ++y) CHECK(out[1].probs(y) == doctest::Approx(0.2).epsilon(1e-14));
    }

    const ChainModel c = random_chain(6, {4, 3}, {3, 2}, 9);
    const Vector z = random_vector(6, rng);
    const auto out = chain_forward(c, z);
    REQUIRE(out.size() == 2);
    CHECK(out[0].probs.size() == 4);
    CHECK(out[1].probs.size() == 3);
    const Vector manual = posterior(c.stages[1], posterior(c.stages[0], z).probs).probs;
    CHECK((out[1].probs - manual).cwiseAbs().maxCoeff() < 1e-15);

    Matrix batch(2, 6);
    batch.row(0) = z.transpose();
    batch.row(1) = random_vector(6, rng).transpose();
    const auto rows = chain_forward(c, batch);
    CHECK((rows[1].row(0).transpose() - manual).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("chain validation") {
    ChainModel c = random_chain(4, {3, 2}, {1, 1}, 1);
    c.stages[1] = random_stage(4, 2, 1, 2);
    CHECK_THROWS_AS(c.validate(), InvalidModel);
    CHECK_THROWS_AS(chain_forward(c, Vector(Vector::Zero(4))), InvalidModel);

    ChainModel w = random_chain(4, {3}, {1}, 1);
    w.stage_weights = {0.0};
    CHECK_THROWS_AS(w.validate(), InvalidModel);
    w.stage_weights = {-1.0};
    CHECK_THROWS_AS(w.validate(), InvalidModel);
    w.stage_weights = {};
    CHECK_THROWS_AS(w.validate(), InvalidModel);

    CHECK_THROWS_AS(StageModel(3, 2, 0), InvalidInput);
    StageModel bad(3, 2, 1);
    bad.biases.resize(3);
    CHECK_THROWS_AS(bad.validate(), InvalidInput);
}

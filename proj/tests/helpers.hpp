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

#include <cstdint>
#include <vector>

#include "svq/core.hpp"
#include "svq/dataset.hpp"

namespace svq::testing {

inline Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng, double lo = -1.0, double hi = 1.0) {
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.uniform(lo, hi);
    return m;
}

inline Vector random_vector(Eigen::Index n, Rng& rng, double lo = -1.0, double hi = 1.0) {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = rng.uniform(lo, hi);
    return v;
}

inline StageModel random_stage(std::size_t d, std::size_t M, std::size_t n, std::uint64_t seed,
                               double scale = 1.0) {
    Rng rng(seed);
    StageModel s(d, M, n);
    const auto Mi = static_cast<Eigen::Index>(M);
    const auto di = static_cast<Eigen::Index>(d);
    s.weights = random_matrix(Mi, di, rng, -scale, scale);
    s.biases = random_vector(Mi, rng, -scale, scale);
    s.recon = random_matrix(Mi, di, rng, -1.0, 1.0);
    return s;
}

inline Dataset random_data(std::size_t N, std::size_t d, std::uint64_t seed, bool weighted = false) {
    Rng rng(seed);
    Matrix x = random_matrix(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(d), rng);
    if (!weighted) return Dataset(std::move(x));
    Vector w = random_vector(static_cast<Eigen::Index>(N), rng, 0.1, 1.0);
    w /= w.sum();
    return Dataset(std::move(x), std::move(w));
}

/// Chain with the given code book sizes; dims[0] is the input dimension.
inline ChainModel random_chain(std::size_t d, const std::vector<std::size_t>& M, const std::vector<std::size_t>& n,
                               std::uint64_t seed, double scale = 1.0) {
    ChainModel c;
    std::size_t in = d;
    for (std::size_t l = 0; l < M.size(); ++l) {
        c.stages.push_back(random_stage(in, M[l], n[l], seed * 1000 + l, scale));
        c.stage_weights.push_back(1.0 + 0.5 * static_cast<double>(l));
        in = M[l];
    }
    return c;
}

}  // namespace svq::testing

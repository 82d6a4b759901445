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

#include "svq/types.hpp"

namespace svq {

/// Empirical input distribution: one vector per row, with probability weights.
struct Dataset {
    Matrix vectors;  // N x dim
    Vector weights;  // N, sums to 1

    Dataset() = default;
    /// Uniform weights.
    explicit Dataset(Matrix vectors);
    /// Explicit weights; throws InvalidInput unless non-negative and summing to 1 (1e-12).
    Dataset(Matrix vectors, Vector weights);

    std::size_t size() const { return static_cast<std::size_t>(vectors.rows()); }
    std::size_t dim() const { return static_cast<std::size_t>(vectors.cols()); }

    /// Weighted mean vector.
    Vector mean() const;

    /// Same weights, different vectors (used for the inputs of later chain stages).
    Dataset with_vectors(Matrix next) const;
};

}  // namespace svq

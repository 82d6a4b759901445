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
#include "svq/dataset.hpp"

#include <cmath>

namespace svq {

Dataset::Dataset(Matrix v) : vectors(std::move(v)) {
    if (vectors.rows() == 0 || vectors.cols() == 0) throw InvalidInput("dataset is empty");
    weights = Vector::Constant(vectors.rows(), 1.0 / static_cast<double>(vectors.rows()));
}

Dataset::Dataset(Matrix v, Vector w) : vectors(std::move(v)), weights(std::move(w)) {
    if (vectors.rows() == 0 || vectors.cols() == 0) throw InvalidInput("dataset is empty");
    if (weights.size() != vectors.rows()) throw InvalidInput("one weight per vector required");
    if (weights.minCoeff() < 0.0) throw InvalidInput("dataset weights must be non-negative");
    if (std::abs(weights.sum() - 1.0) > 1e-12) throw InvalidInput("dataset weights must sum to 1");
}

Vector Dataset::mean() const { return vectors.transpose() * weights; }

Dataset Dataset::with_vectors(Matrix next) const {
    if (next.rows() != vectors.rows()) throw InvalidInput("row count changed");
    Dataset out;
    out.vectors = std::move(next);
    out.weights = weights;
    return out;
}

}  // namespace svq

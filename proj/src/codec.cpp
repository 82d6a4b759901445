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
#include "svq/codec.hpp"

#include <cmath>
#include <string>

namespace svq {

EncodeResult encode(const StageModel& stage, const Matrix& inputs, std::size_t n, Rng& rng) {
    if (static_cast<std::size_t>(inputs.cols()) != stage.dim_in) {
        throw InvalidInput("input vectors have " + std::to_string(inputs.cols()) + " components, stage expects " +
                           std::to_string(stage.dim_in));
    }
    if (n < 1) throw InvalidInput("at least one code index per input");
    if (inputs.rows() == 0) throw InvalidInput("no input vectors");
    EncodeResult out;
    out.codes.reserve(static_cast<std::size_t>(inputs.rows()));
    double mean = 0.0;
    double m2 = 0.0;
    for (Eigen::Index i = 0; i < inputs.rows(); ++i) {
        const Vector x = inputs.row(i).transpose();
        CodeSample s = sample_code(posterior(stage, x), n, rng);
        const double err = 2.0 * (x - reconstruct(stage, s)).squaredNorm();
        const double delta = err - mean;
        mean += delta / static_cast<double>(i + 1);
        m2 += delta * (err - mean);
        out.codes.push_back(std::move(s));
    }
    const auto count = static_cast<double>(inputs.rows());
    out.distortion.mean = mean;
    out.distortion.std_error = count > 1 ? std::sqrt(m2 / (count - 1) / count) : 0.0;
    return out;
}

Matrix decode(const StageModel& stage, const std::vector<CodeSample>& codes) {
    Matrix out(static_cast<Eigen::Index>(codes.size()), static_cast<Eigen::Index>(stage.dim_in));
    for (std::size_t i = 0; i < codes.size(); ++i) {
        out.row(static_cast<Eigen::Index>(i)) = reconstruct(stage, codes[i]).transpose();
    }
    return out;
}

double round_trip_distortion(const Matrix& original, const Matrix& decoded) {
    if (original.rows() != decoded.rows() || original.cols() != decoded.cols()) {
        throw InvalidInput("original and decoded vectors differ in shape");
    }
    if (original.rows() == 0) throw InvalidInput("no vectors");
    return 2.0 * (original - decoded).rowwise().squaredNorm().mean();
}

}  // namespace svq

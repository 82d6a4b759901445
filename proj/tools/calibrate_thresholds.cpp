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
// Reproduces the frozen classifier thresholds in config/classify.json.
//
// Reference runs: the correlated-joint preset on seeds 101..103.
//   theta_inv        = half the median centroid variation over all inputs, to 2 decimals
//   joint_spread_max = 90th percentile of two-bump code spreads, rounded up to 0.1 pixel
// The 75% fractions are fixed by definition and not calibrated.
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <vector>

#include "svq/classify.hpp"
#include "svq/presets.hpp"
#include "svq/train.hpp"

using namespace svq;

namespace {

double quantile(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = static_cast<std::size_t>(std::ceil(pos));
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<double> centroid;
    std::vector<double> spread;
    for (const std::uint64_t seed : {101, 102, 103}) {
        const Experiment e = expand_preset("correlated-joint", seed);
        const Dataset data = enumerate_configs(*e.source);
        const ChainModel model = train(init_model(e.layout, data, seed, e.init_scale), data, e.schedule).model;
        const EncoderTypeReport r = classify_encoder(model, *e.source);
        centroid.insert(centroid.end(), r.invariance.centroid_variation.begin(), r.invariance.centroid_variation.end());
        for (const auto& c : r.codes)
            if (c.bump_count == 2) spread.push_back(c.response_spread);
        std::cerr << "seed " << seed << ": two-bump codes " << r.double_bump << '\n';
    }
    const double theta = std::round(50.0 * quantile(centroid, 0.5)) / 100.0;
    const double spread_max = std::ceil(10.0 * quantile(spread, 0.9)) / 10.0;

    std::ofstream file;
    std::ostream* out = &std::cout;
    if (argc > 1) {
        file.open(argv[1]);
        if (!file) {
            std::cerr << "cannot write " << argv[1] << '\n';
            return 1;
        }
        out = &file;
    }
    *out << "{\n  \"code_fraction\": 0.75,\n  \"input_fraction\": 0.75,\n  \"theta_inv\": " << theta
         << ",\n  \"joint_spread_max\": " << spread_max << "\n}\n";
    return 0;
}

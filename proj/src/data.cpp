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
#include "svq/data.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "svq/numfmt.hpp"

namespace svq {

void HumpPairSource::validate() const {
    if (dim < 2) throw InvalidInput("hump source needs dim >= 2");
    if (!(half_width > 0.0)) throw InvalidInput("half_width must be positive");
    if (placement == Placement::correlated &&
        !(1 <= offset_min && offset_min <= offset_max && offset_max < dim)) {
        throw InvalidInput("correlated offsets need 1 <= offset_min <= offset_max < dim");
    }
}

std::string HumpPairSource::describe() const {
    std::ostringstream os;
    os << "hump-pair dim=" << dim << " half_width=" << format_exact(half_width)
       << " amplitude=" << format_exact(amplitude) << " placement="
       << (placement == Placement::independent ? "independent" : "correlated");
    if (placement == Placement::correlated) os << " offsets=[" << offset_min << ',' << offset_max << ']';
    return os.str();
}

std::size_t circular_distance(std::size_t a, std::size_t b, std::size_t dim) {
    const std::size_t d = a > b ? a - b : b - a;
    return std::min(d, dim - d);
}

Vector hump_vector(const HumpPairSource& source, std::size_t pos1, std::size_t pos2) {
    source.validate();
    if (pos1 < 1 || pos1 > source.dim || pos2 < 1 || pos2 > source.dim) {
        throw InvalidInput("hump positions must lie in [1, dim]");
    }
    const double scale = std::numbers::ln2 / (source.half_width * source.half_width);
    auto profile = [&](std::size_t k, std::size_t p) {
        const double d = static_cast<double>(circular_distance(k, p, source.dim));
        return std::exp(-scale * d * d);
    };
    Vector v(static_cast<Eigen::Index>(source.dim));
    for (std::size_t k = 1; k <= source.dim; ++k) {
        v(static_cast<Eigen::Index>(k - 1)) = source.amplitude * (profile(k, pos1) + profile(k, pos2));
    }
    return v;
}

std::vector<HumpConfig> hump_configs(const HumpPairSource& source) {
    source.validate();
    std::vector<HumpConfig> out;
    for (std::size_t p1 = 1; p1 <= source.dim; ++p1) {
        if (source.placement == Placement::independent) {
            for (std::size_t p2 = 1; p2 <= source.dim; ++p2) out.push_back({p1, p2});
        } else {
            for (std::size_t off = source.offset_min; off <= source.offset_max; ++off) {
                out.push_back({p1, (p1 - 1 + off) % source.dim + 1});
            }
        }
    }
    return out;
}

Dataset enumerate_configs(const HumpPairSource& source) {
    const std::vector<HumpConfig> configs = hump_configs(source);
    Matrix vectors(static_cast<Eigen::Index>(configs.size()), static_cast<Eigen::Index>(source.dim));
    for (std::size_t i = 0; i < configs.size(); ++i) {
        vectors.row(static_cast<Eigen::Index>(i)) = hump_vector(source, configs[i].pos1, configs[i].pos2);
    }
    return Dataset(std::move(vectors));
}

void TorusSource::validate() const {
    if (dim < 4) throw InvalidInput("torus source needs dim >= 4");
    if (wavenumber1 <= 0 || wavenumber2 <= 0) throw InvalidInput("wavenumbers must be positive");
    if (wavenumber1 == wavenumber2) throw InvalidInput("wavenumbers must differ");
}

std::string TorusSource::describe() const {
    std::ostringstream os;
    os << "torus dim=" << dim << " amplitudes=(" << format_exact(amplitude1) << ','
       << format_exact(amplitude2) << ") wavenumbers=(" << wavenumber1 << ',' << wavenumber2 << ')';
    return os.str();
}

Vector torus_vector(const TorusSource& source, double phase1, double phase2) {
    source.validate();
    const double step = 2.0 * std::numbers::pi / static_cast<double>(source.dim);
    Vector v(static_cast<Eigen::Index>(source.dim));
    for (std::size_t k = 0; k < source.dim; ++k) {
        const double t = step * static_cast<double>(k);
        v(static_cast<Eigen::Index>(k)) = source.amplitude1 * std::sin(source.wavenumber1 * t + phase1) +
                                          source.amplitude2 * std::sin(source.wavenumber2 * t + phase2);
    }
    return v;
}

Dataset torus_grid(const TorusSource& source, std::size_t grid) {
    if (grid < 2) throw InvalidInput("torus grid needs at least 2 points per axis");
    const double step = 2.0 * std::numbers::pi / static_cast<double>(grid);
    Matrix vectors(static_cast<Eigen::Index>(grid * grid), static_cast<Eigen::Index>(source.dim));
    for (std::size_t a = 0; a < grid; ++a) {
        for (std::size_t b = 0; b < grid; ++b) {
            vectors.row(static_cast<Eigen::Index>(a * grid + b)) =
                torus_vector(source, step * static_cast<double>(a), step * static_cast<double>(b)).transpose();
        }
    }
    return Dataset(std::move(vectors));
}

}  // namespace svq

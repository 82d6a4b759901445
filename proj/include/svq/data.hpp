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
#include <string>
#include <vector>

#include "svq/dataset.hpp"

namespace svq {

enum class Placement { independent, correlated };

/**
 * Two identical Gaussian humps on a circular array of `dim` pixels.
 *
 * The profile is g(d) = exp(-ln2 (d / half_width)^2), so `half_width` is the
 * half width at half maximum. Positions are 1-based pixel indices. In the
 * correlated placement the second object sits offset_min..offset_max pixels
 * after the first, wrapping around.
 */
struct HumpPairSource {
    std::size_t dim = 24;
    double half_width = 1.5;
    double amplitude = 1.0;
    Placement placement = Placement::independent;
    std::size_t offset_min = 4;
    std::size_t offset_max = 8;

    void validate() const;
    std::string describe() const;
};

/// One enumerated configuration of a hump pair.
struct HumpConfig {
    std::size_t pos1 = 1;
    std::size_t pos2 = 1;
};

/// Circular pixel distance between 1-based positions a and b.
std::size_t circular_distance(std::size_t a, std::size_t b, std::size_t dim);

Vector hump_vector(const HumpPairSource& source, std::size_t pos1, std::size_t pos2);

/// Every configuration of the source, in enumeration order (pos1 outer, pos2 / offset inner).
std::vector<HumpConfig> hump_configs(const HumpPairSource& source);

/// All configurations as a uniformly weighted dataset (rows follow hump_configs order).
Dataset enumerate_configs(const HumpPairSource& source);

/// Sum of two sinusoids whose phases are the intrinsic coordinates of a 2-torus.
struct TorusSource {
    std::size_t dim = 16;
    double amplitude1 = 1.0;
    double amplitude2 = 1.0;
    int wavenumber1 = 1;
    int wavenumber2 = 3;

    void validate() const;
    std::string describe() const;
};

Vector torus_vector(const TorusSource& source, double phase1, double phase2);

/// grid x grid uniform phase lattice, uniformly weighted.
Dataset torus_grid(const TorusSource& source, std::size_t grid);

}  // namespace svq

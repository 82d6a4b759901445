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
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "svq/train.hpp"

namespace svq {

struct PlotOptions {
    std::size_t stage = 1;    // 1-based stage whose reconstruction vectors are drawn
    double amplitude = 1.0;   // grey levels span [0, 2 * amplitude]
    std::size_t cell = 4;     // output pixels per component, both directions
};

/// 8-bit grey image, row-major, one pixel per component.
struct Raster {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> pixels;
};

/// Row t is snapshot t; the M reconstruction vectors sit side by side.
Raster snapshot_raster(const std::vector<Snapshot>& snapshots, const PlotOptions& options);

/// Binary PGM (P5), each pixel scaled up to a cell x cell block.
void write_pgm(std::ostream& out, const Raster& raster, std::size_t cell);
void write_svg(std::ostream& out, const Raster& raster, std::size_t cell);

/// Writes <dir>/snapshots.pgm and <dir>/snapshots.svg.
void plot_snapshots(const std::vector<Snapshot>& snapshots, const std::filesystem::path& dir,
                    const PlotOptions& options = {});

}  // namespace svq

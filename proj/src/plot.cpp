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
#include "svq/plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>

namespace svq {

Raster snapshot_raster(const std::vector<Snapshot>& snapshots, const PlotOptions& options) {
    if (snapshots.empty()) throw InvalidInput("no snapshots to plot");
    if (!(options.amplitude > 0.0)) throw InvalidInput("plot amplitude must be > 0");
    if (options.stage < 1) throw InvalidInput("stages are numbered from 1");
    const std::size_t l = options.stage - 1;
    for (const auto& s : snapshots) {
        if (l >= s.recon.size()) throw InvalidInput("snapshot has no stage " + std::to_string(options.stage));
    }
    const Matrix& first = snapshots.front().recon[l];

    Raster r;
    r.width = static_cast<std::size_t>(first.rows() * first.cols());
    r.height = snapshots.size();
    r.pixels.reserve(r.width * r.height);
    const double top = 2.0 * options.amplitude;
    for (const auto& s : snapshots) {
        const Matrix& m = s.recon[l];
        if (m.rows() != first.rows() || m.cols() != first.cols()) {
            throw InvalidInput("snapshots disagree on the stage shape");
        }
        for (Eigen::Index y = 0; y < m.rows(); ++y) {
            for (Eigen::Index k = 0; k < m.cols(); ++k) {
                const double v = std::clamp(m(y, k), 0.0, top) / top;
                r.pixels.push_back(static_cast<std::uint8_t>(std::lround(255.0 * v)));
            }
        }
    }
    return r;
}

void write_pgm(std::ostream& out, const Raster& raster, std::size_t cell) {
    if (cell < 1) throw InvalidInput("cell size must be >= 1");
    out << "P5\n" << raster.width * cell << ' ' << raster.height * cell << "\n255\n";
    std::vector<char> line(raster.width * cell);
    for (std::size_t i = 0; i < raster.height; ++i) {
        for (std::size_t j = 0; j < raster.width; ++j) {
            std::fill_n(line.begin() + static_cast<std::ptrdiff_t>(j * cell), cell,
                        static_cast<char>(raster.pixels[i * raster.width + j]));
        }
        for (std::size_t rep = 0; rep < cell; ++rep) out.write(line.data(), static_cast<std::streamsize>(line.size()));
    }
}

void write_svg(std::ostream& out, const Raster& raster, std::size_t cell) {
    if (cell < 1) throw InvalidInput("cell size must be >= 1");
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << raster.width * cell << "\" height=\""
        << raster.height * cell << "\" shape-rendering=\"crispEdges\">\n";
    for (std::size_t i = 0; i < raster.height; ++i) {
        for (std::size_t j = 0; j < raster.width; ++j) {
            const int g = raster.pixels[i * raster.width + j];
            out << "<rect x=\"" << j * cell << "\" y=\"" << i * cell << "\" width=\"" << cell << "\" height=\""
                << cell << "\" fill=\"rgb(" << g << ',' << g << ',' << g << ")\"/>\n";
        }
    }
    out << "</svg>\n";
}

void plot_snapshots(const std::vector<Snapshot>& snapshots, const std::filesystem::path& dir,
                    const PlotOptions& options) {
    const Raster r = snapshot_raster(snapshots, options);
    std::ofstream pgm(dir / "snapshots.pgm", std::ios::binary);
    std::ofstream svg(dir / "snapshots.svg");
    if (!pgm || !svg) throw InvalidInput("cannot write plots in " + dir.string());
    write_pgm(pgm, r, options.cell);
    write_svg(svg, r, options.cell);
    if (!pgm || !svg) throw InvalidInput("failed writing plots in " + dir.string());
}

}  // namespace svq

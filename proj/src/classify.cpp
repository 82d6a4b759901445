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
#include "svq/classify.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace svq {

ClassifyThresholds ClassifyThresholds::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot read " + path.string());
    ClassifyThresholds t;
    try {
        const auto j = nlohmann::json::parse(in);
        t.code_fraction = j.at("code_fraction").get<double>();
        t.input_fraction = j.at("input_fraction").get<double>();
        t.theta_inv = j.at("theta_inv").get<double>();
        t.joint_spread_max = j.at("joint_spread_max").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput("malformed thresholds file: " + std::string(e.what()));
    }
    return t;
}

std::string to_string(EncoderType t) {
    switch (t) {
        case EncoderType::factorial_like: return "factorial-like";
        case EncoderType::joint_like: return "joint-like";
        case EncoderType::invariant_like: return "invariant-like";
        case EncoderType::mixed: return "mixed";
    }
    return "mixed";
}

std::vector<std::size_t> bump_peaks(const Vector& v) {
    const Eigen::Index d = v.size();
    std::vector<std::size_t> peaks;
    if (d == 0) return peaks;
    const double threshold = 0.5 * v.maxCoeff();
    if (!(threshold > 0.0)) return peaks;
    std::vector<bool> above(static_cast<std::size_t>(d));
    for (Eigen::Index k = 0; k < d; ++k) above[static_cast<std::size_t>(k)] = v(k) > threshold;
    if (std::all_of(above.begin(), above.end(), [](bool b) { return b; })) return peaks;

    // Walk each run starting at a rising edge; wrap around the end of the array.
    for (Eigen::Index k = 0; k < d; ++k) {
        const auto ku = static_cast<std::size_t>(k);
        const auto prev = static_cast<std::size_t>((k + d - 1) % d);
        if (!above[ku] || above[prev]) continue;
        Eigen::Index best = k;
        for (Eigen::Index j = k; above[static_cast<std::size_t>(j % d)]; ++j) {
            if (v(j % d) > v(best)) best = j % d;
        }
        peaks.push_back(static_cast<std::size_t>(best) + 1);
    }
    return peaks;
}

std::size_t bump_count(const Vector& v) { return bump_peaks(v).size(); }

double tv_distance(const Vector& p, const Vector& q) { return 0.5 * (p - q).cwiseAbs().sum(); }

InvarianceMetrics invariance_metrics(const StageModel& stage, const HumpPairSource& source,
                                     double theta_inv) {
    const std::vector<HumpConfig> configs = hump_configs(source);
    const Dataset data = enumerate_configs(source);
    const Matrix post = posteriors(stage, data.vectors);
    const std::size_t dim = source.dim;

    std::map<std::pair<std::size_t, std::size_t>, Eigen::Index> index;
    for (std::size_t i = 0; i < configs.size(); ++i) {
        index.emplace(std::pair{configs[i].pos1, configs[i].pos2}, static_cast<Eigen::Index>(i));
    }
    auto shift = [dim](std::size_t p, long delta) {
        const long d = static_cast<long>(dim);
        return static_cast<std::size_t>(((static_cast<long>(p) - 1 + delta) % d + d) % d + 1);
    };
    auto lookup = [&](std::size_t a, std::size_t b) -> std::optional<Eigen::Index> {
        const auto it = index.find({a, b});
        if (it == index.end()) return std::nullopt;
        return it->second;
    };

    InvarianceMetrics m;
    std::size_t eligible = 0;
    std::size_t invariant = 0;
    for (std::size_t i = 0; i < configs.size(); ++i) {
        const auto row = static_cast<Eigen::Index>(i);
        const auto [p1, p2] = configs[i];
        // Each neighbour moves both objects by one pixel: apart/together keeps the
        // centroid, a common shift keeps the separation.
        double sep = 0.0;
        int sep_n = 0;
        for (const long dir : {-1L, 1L}) {
            if (const auto j = lookup(shift(p1, -dir), shift(p2, dir))) {
                sep += tv_distance(post.row(row).transpose(), post.row(*j).transpose());
                ++sep_n;
            }
        }
        double cen = 0.0;
        int cen_n = 0;
        for (const long dir : {-1L, 1L}) {
            if (const auto j = lookup(shift(p1, dir), shift(p2, dir))) {
                cen += tv_distance(post.row(row).transpose(), post.row(*j).transpose());
                ++cen_n;
            }
        }
        m.separation_variation.push_back(sep_n ? sep / sep_n : 0.0);
        m.centroid_variation.push_back(cen_n ? cen / cen_n : 0.0);
        if (sep_n && cen_n) {
            ++eligible;
            if (m.separation_variation.back() < theta_inv && m.centroid_variation.back() > theta_inv) ++invariant;
        }
    }
    m.invariant_fraction = eligible ? static_cast<double>(invariant) / static_cast<double>(eligible) : 0.0;
    return m;
}

EncoderTypeReport classify_encoder(const ChainModel& model, const HumpPairSource& source,
                                   const ClassifyThresholds& thresholds) {
    model.validate();
    const StageModel& stage = model.stages.front();
    if (stage.dim_in != source.dim) throw InvalidInput("first stage does not match the source dimension");

    const std::vector<HumpConfig> configs = hump_configs(source);
    const Dataset data = enumerate_configs(source);
    const Matrix post = posteriors(stage, data.vectors);

    EncoderTypeReport report;
    std::set<std::size_t> single_peaks;
    std::size_t joint_codes = 0;
    for (Eigen::Index y = 0; y < stage.recon.rows(); ++y) {
        CodeMetrics cm;
        cm.peaks = bump_peaks(stage.recon.row(y).transpose());
        cm.bump_count = cm.peaks.size();

        // Posterior-weighted distance from each object to the nearest recon peak.
        if (cm.peaks.empty()) {
            cm.response_spread = static_cast<double>(source.dim) / 2.0;
        } else {
            auto nearest = [&](std::size_t pos) {
                std::size_t best = source.dim;
                for (const std::size_t pk : cm.peaks) best = std::min(best, circular_distance(pos, pk, source.dim));
                return static_cast<double>(best);
            };
            double num = 0.0;
            double den = 0.0;
            for (std::size_t i = 0; i < configs.size(); ++i) {
                const double w = data.weights(static_cast<Eigen::Index>(i)) * post(static_cast<Eigen::Index>(i), y);
                num += w * 0.5 * (nearest(configs[i].pos1) + nearest(configs[i].pos2));
                den += w;
            }
            cm.response_spread = den > 0.0 ? num / den : static_cast<double>(source.dim) / 2.0;
        }

        if (cm.bump_count == 1) single_peaks.insert(cm.peaks.front());
        if (cm.bump_count == 2) {
            ++report.double_bump;
            const std::size_t sep = circular_distance(cm.peaks[0], cm.peaks[1], source.dim);
            if (sep >= source.offset_min && sep <= source.offset_max) ++report.double_bump_in_range;
            if (cm.response_spread <= thresholds.joint_spread_max) ++joint_codes;
        }
        report.codes.push_back(std::move(cm));
    }
    report.single_bump_distinct = single_peaks.size();
    report.invariance = invariance_metrics(stage, source, thresholds.theta_inv);

    const double needed = thresholds.code_fraction * static_cast<double>(report.codes.size());
    if (report.invariance.invariant_fraction >= thresholds.input_fraction) {
        report.type = EncoderType::invariant_like;
    } else if (static_cast<double>(report.single_bump_distinct) >= needed) {
        report.type = EncoderType::factorial_like;
    } else if (static_cast<double>(joint_codes) >= needed) {
        report.type = EncoderType::joint_like;
    } else {
        report.type = EncoderType::mixed;
    }
    return report;
}

void print_report(std::ostream& out, const EncoderTypeReport& report) {
    out << "code  bumps  peaks        spread\n";
    for (std::size_t y = 0; y < report.codes.size(); ++y) {
        const CodeMetrics& c = report.codes[y];
        std::ostringstream peaks;
        for (std::size_t k = 0; k < c.peaks.size(); ++k) peaks << (k ? "," : "") << c.peaks[k];
        out << std::setw(4) << y + 1 << "  " << std::setw(5) << c.bump_count << "  " << std::left
            << std::setw(11) << peaks.str() << std::right << "  " << std::fixed << std::setprecision(3)
            << c.response_spread << '\n';
    }
    out << "single-bump codes with distinct peaks: " << report.single_bump_distinct << '\n';
    out << "two-bump codes: " << report.double_bump << " (separation in range: " << report.double_bump_in_range
        << ")\n";
    out << "separation-invariant input fraction: " << std::fixed << std::setprecision(3)
        << report.invariance.invariant_fraction << '\n';
    out << "classification: " << to_string(report.type) << '\n';
    out.unsetf(std::ios::floatfield);
}

}  // namespace svq

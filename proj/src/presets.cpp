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
#include "svq/presets.hpp"

#include <sstream>

#include <json.hpp>

namespace svq {

namespace {

TrainingPhase phase(std::size_t steps, double eps, std::vector<double> s) {
    return TrainingPhase::uniform(steps, eps, std::move(s));
}

HumpPairSource hump_source(Placement placement) {
    HumpPairSource src;
    src.placement = placement;
    return src;
}

std::string join(const std::vector<double>& v) {
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    return os.str();
}

bool all_equal(const std::vector<double>& v) {
    for (const double x : v)
        if (x != v.front()) return false;
    return true;
}

std::vector<double> per_stage(const nlohmann::json& j, const char* key, std::size_t stages) {
    const auto& v = j.at(key);
    if (v.is_number()) return std::vector<double>(stages, v.get<double>());
    auto out = v.get<std::vector<double>>();
    if (out.size() != stages) {
        throw InvalidInput(std::string("phase field '") + key + "' needs one value per stage");
    }
    return out;
}

}  // namespace

void Experiment::validate() const {
    if (layout.empty()) throw InvalidInput("experiment has no stages");
    if (source) {
        source->validate();
        if (layout.front().dim_in != source->dim) throw InvalidInput("first stage must match the source dimension");
    }
    for (std::size_t l = 0; l < layout.size(); ++l) {
        const StageLayout& sl = layout[l];
        if (sl.dim_in < 1 || sl.codebook_size < 1 || sl.num_samples < 1) {
            throw InvalidInput("stage " + std::to_string(l + 1) + " needs dim_in, M, n >= 1");
        }
        if (l > 0 && sl.dim_in != layout[l - 1].codebook_size) {
            throw InvalidModel("stage " + std::to_string(l + 1) + " input must equal M of the previous stage");
        }
    }
    if (!(init_scale >= 0.0)) throw InvalidInput("init_scale must be >= 0");
    schedule.validate(layout.size());
}

std::vector<std::string> preset_names() {
    return {"independent-factorial", "correlated-factorial-1stage", "correlated-factorial-2stage",
            "correlated-joint", "correlated-invariant"};
}

Experiment expand_preset(const std::string& name, std::uint64_t seed) {
    Experiment e;
    e.name = name;
    e.schedule.seed = seed;
    if (name == "independent-factorial") {
        e.source = hump_source(Placement::independent);
        e.layout = {{24, 16, 20}};
        e.schedule.phases = {phase(250, 0.2, {1}), phase(250, 0.1, {1})};
    } else if (name == "correlated-factorial-1stage") {
        e.source = hump_source(Placement::correlated);
        e.layout = {{24, 16, 20}};
        e.schedule.phases = {phase(500, 0.2, {1}), phase(500, 0.1, {1})};
    } else if (name == "correlated-factorial-2stage") {
        e.source = hump_source(Placement::correlated);
        e.layout = {{24, 16, 20}, {16, 16, 20}};
        e.schedule.phases = {phase(500, 0.2, {1, 1}), phase(500, 0.1, {1, 1})};
    } else if (name == "correlated-joint") {
        e.source = hump_source(Placement::correlated);
        e.layout = {{24, 16, 3}};
        e.schedule.phases = {phase(500, 0.2, {1}), phase(500, 0.1, {1}), phase(1000, 0.05, {1})};
    } else if (name == "correlated-invariant") {
        e.source = hump_source(Placement::correlated);
        e.layout = {{24, 16, 3}, {16, 16, 3}};
        e.schedule.phases = {phase(500, 0.2, {1, 5}), phase(500, 0.1, {1, 10}), phase(500, 0.05, {1, 20}),
                             phase(500, 0.05, {1, 40})};
    } else {
        std::string known;
        for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
        throw InvalidInput("unknown preset '" + name + "' (known: " + known + ")");
    }
    return e;
}

std::string describe_experiment(const Experiment& e) {
    std::ostringstream os;
    os << "preset " << (e.name.empty() ? "custom" : e.name) << '\n';
    if (e.source) os << "source " << e.source->describe() << '\n';
    for (std::size_t l = 0; l < e.layout.size(); ++l) {
        os << "stage " << l + 1 << " M=" << e.layout[l].codebook_size << " n=" << e.layout[l].num_samples << '\n';
    }
    for (std::size_t k = 0; k < e.schedule.phases.size(); ++k) {
        const TrainingPhase& p = e.schedule.phases[k];
        os << "phase " << k + 1 << " steps=" << p.steps;
        if (p.eps_w == p.eps_b && p.eps_w == p.eps_x && all_equal(p.eps_w)) {
            os << " eps=" << p.eps_w.front();
        } else {
            os << " eps_w=" << join(p.eps_w) << " eps_b=" << join(p.eps_b) << " eps_x=" << join(p.eps_x);
        }
        os << " s=" << join(p.stage_weights) << '\n';
    }
    return os.str();
}

Experiment experiment_from_json(const std::string& text, std::size_t first_dim) {
    Experiment e;
    try {
        const auto doc = nlohmann::json::parse(text);
        e.name = doc.value("name", std::string{});
        if (doc.contains("source")) {
            const auto& js = doc.at("source");
            HumpPairSource src;
            const std::string placement = js.value("placement", std::string("independent"));
            if (placement == "independent") {
                src.placement = Placement::independent;
            } else if (placement == "correlated") {
                src.placement = Placement::correlated;
            } else {
                throw InvalidInput("source placement must be 'independent' or 'correlated'");
            }
            src.dim = js.value("dim", src.dim);
            src.half_width = js.value("half_width", src.half_width);
            src.amplitude = js.value("amplitude", src.amplitude);
            src.offset_min = js.value("offset_min", src.offset_min);
            src.offset_max = js.value("offset_max", src.offset_max);
            e.source = src;
            first_dim = src.dim;
        }
        std::size_t dim = first_dim;
        for (const auto& st : doc.at("stages")) {
            StageLayout sl{dim, st.at("M").get<std::size_t>(), st.at("n").get<std::size_t>()};
            e.layout.push_back(sl);
            dim = sl.codebook_size;
        }
        const std::size_t L = e.layout.size();
        e.init_scale = doc.value("init_scale", e.init_scale);
        const std::string bias = doc.value("bias_norm", std::string("gradient"));
        if (bias == "gradient") {
            e.schedule.bias_norm = BiasNorm::gradient;
        } else if (bias == "bias-magnitude") {
            e.schedule.bias_norm = BiasNorm::bias_magnitude;
        } else {
            throw InvalidInput("bias_norm must be 'gradient' or 'bias-magnitude'");
        }
        e.schedule.snapshot_stride = doc.value("snapshot_stride", e.schedule.snapshot_stride);
        for (const auto& jp : doc.at("phases")) {
            TrainingPhase p;
            p.steps = jp.at("steps").get<std::size_t>();
            const bool scalar = jp.contains("eps");
            p.eps_w = per_stage(jp, scalar ? "eps" : "eps_w", L);
            p.eps_b = per_stage(jp, scalar ? "eps" : "eps_b", L);
            p.eps_x = per_stage(jp, scalar ? "eps" : "eps_x", L);
            p.stage_weights = jp.contains("s") ? per_stage(jp, "s", L) : std::vector<double>(L, 1.0);
            e.schedule.phases.push_back(std::move(p));
        }
    } catch (const nlohmann::json::exception& ex) {
        throw InvalidInput(std::string("malformed experiment file: ") + ex.what());
    }
    e.validate();
    return e;
}

std::string experiment_to_json(const Experiment& e) {
    nlohmann::ordered_json doc;
    doc["name"] = e.name;
    if (e.source) {
        const HumpPairSource& s = *e.source;
        doc["source"] = {{"placement", s.placement == Placement::independent ? "independent" : "correlated"},
                         {"dim", s.dim},
                         {"half_width", s.half_width},
                         {"amplitude", s.amplitude},
                         {"offset_min", s.offset_min},
                         {"offset_max", s.offset_max}};
    }
    doc["stages"] = nlohmann::ordered_json::array();
    for (const auto& sl : e.layout) doc["stages"].push_back({{"M", sl.codebook_size}, {"n", sl.num_samples}});
    doc["init_scale"] = e.init_scale;
    doc["bias_norm"] = e.schedule.bias_norm == BiasNorm::gradient ? "gradient" : "bias-magnitude";
    doc["snapshot_stride"] = e.schedule.snapshot_stride;
    doc["phases"] = nlohmann::ordered_json::array();
    for (const auto& p : e.schedule.phases) {
        doc["phases"].push_back({{"steps", p.steps},
                                 {"eps_w", p.eps_w},
                                 {"eps_b", p.eps_b},
                                 {"eps_x", p.eps_x},
                                 {"s", p.stage_weights}});
    }
    return doc.dump(2) + "\n";
}

}  // namespace svq

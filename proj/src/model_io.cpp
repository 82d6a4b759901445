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
#include "svq/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "svq/numfmt.hpp"

namespace svq {

namespace {

void write_row(std::ostream& out, const auto& row) {
    out << '[';
    for (Eigen::Index j = 0; j < row.size(); ++j) {
        if (j) out << ", ";
        out << format_exact(row(j));
    }
    out << ']';
}

void write_rows(std::ostream& out, const Matrix& m, const char* indent) {
    out << "[\n";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        out << indent << "  ";
        write_row(out, m.row(i));
        out << (i + 1 < m.rows() ? ",\n" : "\n");
    }
    out << indent << ']';
}

Matrix read_rows(const nlohmann::json& j, std::size_t rows, std::size_t cols, const char* what) {
    if (!j.is_array() || j.size() != rows) {
        throw InvalidInput(std::string("model field '") + what + "' must have M rows");
    }
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows; ++i) {
        const auto& r = j[i];
        if (!r.is_array() || r.size() != cols) {
            throw InvalidInput(std::string("model field '") + what + "' rows must have dim_in entries");
        }
        for (std::size_t c = 0; c < cols; ++c) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = r[c].get<double>();
        }
    }
    return m;
}

}  // namespace

void write_model(std::ostream& out, const ChainModel& chain) {
    chain.validate();
    out << "{\n  \"version\": " << kModelFormatVersion << ",\n  \"stages\": [\n";
    for (std::size_t l = 0; l < chain.size(); ++l) {
        const StageModel& st = chain.stages[l];
        out << "    {\n";
        out << "      \"dim_in\": " << st.dim_in << ",\n";
        out << "      \"M\": " << st.codebook_size << ",\n";
        out << "      \"n\": " << st.num_samples << ",\n";
        out << "      \"weights\": ";
        write_rows(out, st.weights, "      ");
        out << ",\n      \"biases\": ";
        write_row(out, st.biases);
        out << ",\n      \"recon\": ";
        write_rows(out, st.recon, "      ");
        out << "\n    }" << (l + 1 < chain.size() ? ",\n" : "\n");
    }
    out << "  ],\n  \"stage_weights\": ";
    write_row(out, Eigen::Map<const Vector>(chain.stage_weights.data(),
                                            static_cast<Eigen::Index>(chain.stage_weights.size())));
    out << "\n}\n";
}

std::string model_to_json(const ChainModel& chain) {
    std::ostringstream os;
    write_model(os, chain);
    return os.str();
}

ChainModel model_from_json(const std::string& text) {
    ChainModel chain;
    try {
        const auto doc = nlohmann::json::parse(text);
        if (doc.at("version").get<int>() != kModelFormatVersion) {
            throw InvalidInput("unsupported model version " + doc.at("version").dump());
        }
        for (const auto& js : doc.at("stages")) {
            const auto d = js.at("dim_in").get<std::size_t>();
            const auto m = js.at("M").get<std::size_t>();
            StageModel st(d, m, js.at("n").get<std::size_t>());
            st.weights = read_rows(js.at("weights"), m, d, "weights");
            st.recon = read_rows(js.at("recon"), m, d, "recon");
            const auto& b = js.at("biases");
            if (!b.is_array() || b.size() != m) throw InvalidInput("model field 'biases' must have M entries");
            for (std::size_t y = 0; y < m; ++y) st.biases(static_cast<Eigen::Index>(y)) = b[y].get<double>();
            chain.stages.push_back(std::move(st));
        }
        chain.stage_weights = doc.at("stage_weights").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("malformed model file: ") + e.what());
    }
    chain.validate();
    return chain;
}

void save_model(const std::filesystem::path& path, const ChainModel& chain) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInput("cannot write " + path.string());
    write_model(out, chain);
    if (!out) throw InvalidInput("failed writing " + path.string());
}

ChainModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot read " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return model_from_json(os.str());
}

}  // namespace svq

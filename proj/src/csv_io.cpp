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
#include "svq/csv_io.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>

#include "svq/numfmt.hpp"
#include "svq/objective.hpp"

namespace svq {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Non-comment, non-blank lines split into trimmed fields, with their line numbers.
std::vector<std::pair<std::size_t, std::vector<std::string>>> read_records(std::istream& in) {
    std::vector<std::pair<std::size_t, std::vector<std::string>>> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            const auto comma = t.find(',', start);
            fields.push_back(trim(t.substr(start, comma == std::string::npos ? std::string::npos : comma - start)));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        out.emplace_back(lineno, std::move(fields));
    }
    return out;
}

double parse_double(const std::string& s, std::size_t lineno) {
    const char* begin = s.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (s.empty() || end != begin + s.size()) {
        throw InvalidInput("line " + std::to_string(lineno) + ": '" + s + "' is not a number");
    }
    return v;
}

std::size_t parse_index(const std::string& s, std::size_t lineno) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
        throw InvalidInput("line " + std::to_string(lineno) + ": '" + s + "' is not a non-negative integer");
    }
    return v;
}

}  // namespace

void write_matrix_csv(std::ostream& out, const Matrix& m, const std::vector<std::string>& comments) {
    for (const auto& c : comments) out << "# " << c << '\n';
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) out << (j ? "," : "") << format_exact(m(i, j));
        out << '\n';
    }
}

Matrix read_matrix_csv(std::istream& in) {
    const auto records = read_records(in);
    if (records.empty()) throw InvalidInput("CSV has no data rows");
    const std::size_t cols = records.front().second.size();
    Matrix m(static_cast<Eigen::Index>(records.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& [lineno, fields] = records[i];
        if (fields.size() != cols) {
            throw InvalidInput("line " + std::to_string(lineno) + ": expected " + std::to_string(cols) +
                               " values, found " + std::to_string(fields.size()));
        }
        for (std::size_t j = 0; j < cols; ++j) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = parse_double(fields[j], lineno);
        }
    }
    return m;
}

Matrix read_matrix_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot read " + path.string());
    return read_matrix_csv(in);
}

void save_matrix_csv(const std::filesystem::path& path, const Matrix& m, const std::vector<std::string>& comments) {
    std::ofstream out(path);
    if (!out) throw InvalidInput("cannot write " + path.string());
    write_matrix_csv(out, m, comments);
    if (!out) throw InvalidInput("failed writing " + path.string());
}

void write_index_csv(std::ostream& out, const std::vector<CodeSample>& samples) {
    for (const auto& s : samples) {
        for (std::size_t i = 0; i < s.indices.size(); ++i) out << (i ? "," : "") << s.indices[i];
        out << '\n';
    }
}

std::vector<CodeSample> read_index_csv(std::istream& in) {
    std::vector<CodeSample> out;
    for (const auto& [lineno, fields] : read_records(in)) {
        CodeSample s;
        for (const auto& f : fields) {
            const std::size_t y = parse_index(f, lineno);
            if (y < 1) throw InvalidInput("line " + std::to_string(lineno) + ": code indices start at 1");
            s.indices.push_back(y);
        }
        out.push_back(std::move(s));
    }
    if (out.empty()) throw InvalidInput("index CSV has no rows");
    return out;
}

void write_trace_csv(std::ostream& out, const TrainingTrace& trace) {
    if (trace.reports.empty()) return;
    write_report_csv_header(out, trace.reports.front().per_stage.size());
    for (std::size_t t = 0; t < trace.reports.size(); ++t) write_report_csv_row(out, t + 1, trace.reports[t]);
}

void write_snapshots_csv(std::ostream& out, const TrainingTrace& trace) {
    out << "# step,stage,code,recon components\n";
    for (const Snapshot& s : trace.snapshots) {
        for (std::size_t l = 0; l < s.recon.size(); ++l) {
            const Matrix& r = s.recon[l];
            for (Eigen::Index y = 0; y < r.rows(); ++y) {
                out << s.step << ',' << l + 1 << ',' << y + 1;
                for (Eigen::Index k = 0; k < r.cols(); ++k) out << ',' << format_exact(r(y, k));
                out << '\n';
            }
        }
    }
}

std::vector<Snapshot> read_snapshots_csv(std::istream& in) {
    std::vector<Snapshot> out;
    std::vector<std::vector<std::vector<double>>> rows;  // per stage of the current snapshot
    auto flush = [&]() {
        if (rows.empty()) return;
        Snapshot& s = out.back();
        for (const auto& stage_rows : rows) {
            Matrix m(static_cast<Eigen::Index>(stage_rows.size()),
                     static_cast<Eigen::Index>(stage_rows.front().size()));
            for (std::size_t y = 0; y < stage_rows.size(); ++y)
                for (std::size_t k = 0; k < stage_rows[y].size(); ++k)
                    m(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(k)) = stage_rows[y][k];
            s.recon.push_back(std::move(m));
        }
        rows.clear();
    };
    for (const auto& [lineno, fields] : read_records(in)) {
        const std::string where = "line " + std::to_string(lineno) + ": ";
        if (fields.size() < 4) throw InvalidInput(where + "snapshot rows need step, stage, code and values");
        const std::size_t step = parse_index(fields[0], lineno);
        const std::size_t stage = parse_index(fields[1], lineno);
        const std::size_t code = parse_index(fields[2], lineno);
        if (out.empty() || out.back().step != step) {
            flush();
            if (!out.empty() && step <= out.back().step) throw InvalidInput(where + "snapshot steps must increase");
            out.push_back(Snapshot{step, {}});
        }
        if (stage == rows.size() + 1) {
            rows.emplace_back();
        } else if (stage != rows.size()) {
            throw InvalidInput(where + "stages must appear in order starting at 1");
        }
        auto& stage_rows = rows.back();
        if (code != stage_rows.size() + 1) throw InvalidInput(where + "codes must appear in order starting at 1");
        std::vector<double> values;
        for (std::size_t k = 3; k < fields.size(); ++k) values.push_back(parse_double(fields[k], lineno));
        if (!stage_rows.empty() && values.size() != stage_rows.front().size()) {
            throw InvalidInput(where + "reconstruction vectors of one stage must have equal length");
        }
        stage_rows.push_back(std::move(values));
    }
    flush();
    if (out.empty()) throw InvalidInput("snapshot CSV has no rows");
    return out;
}

}  // namespace svq

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
// svq: command-line front end for training and using stochastic vector quantisers.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "svq/classify.hpp"
#include "svq/codec.hpp"
#include "svq/csv_io.hpp"
#include "svq/data.hpp"
#include "svq/grad.hpp"
#include "svq/model_io.hpp"
#include "svq/numfmt.hpp"
#include "svq/objective.hpp"
#include "svq/plot.hpp"
#include "svq/presets.hpp"
#include "svq/train.hpp"

namespace fs = std::filesystem;
using namespace svq;

namespace {

constexpr int kExitInvalid = 1;
constexpr int kExitNumerical = 2;

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot read " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::ofstream open_out(const fs::path& path, std::ios::openmode mode = std::ios::out) {
    std::ofstream out(path, mode);
    if (!out) throw InvalidInput("cannot write " + path.string());
    return out;
}

Placement parse_placement(const std::string& s) {
    if (s == "independent") return Placement::independent;
    if (s == "correlated") return Placement::correlated;
    throw InvalidInput("placement must be 'independent' or 'correlated'");
}

// Either a CSV file or the full enumeration of a hump-pair source.
struct DataOptions {
    std::string file;
    std::string placement;

    void add(CLI::App* cmd) {
        auto* f = cmd->add_option("--data", file, "dataset CSV (one vector per row)");
        auto* p = cmd->add_option("--source", placement, "enumerate a hump-pair source: independent | correlated");
        f->excludes(p);
    }

    Dataset load() const {
        if (!file.empty()) return Dataset(read_matrix_csv(fs::path(file)));
        if (!placement.empty()) {
            HumpPairSource src;
            src.placement = parse_placement(placement);
            return enumerate_configs(src);
        }
        throw InvalidInput("give --data FILE or --source PLACEMENT");
    }
};

struct Common {
    std::optional<std::uint64_t> seed;
};

void add_seed(CLI::App* cmd, Common& c, bool required) {
    auto* opt = cmd->add_option("--seed", c.seed, "random seed");
    if (required) opt->required();
}

// ---- gen-data ---------------------------------------------------------------

struct GenData {
    std::string kind = "independent";
    std::size_t dim = 0;
    double half_width = 1.5;
    double amplitude = 1.0;
    std::size_t offset_min = 4;
    std::size_t offset_max = 8;
    std::size_t grid = 16;
    std::vector<double> amplitudes{1.0, 1.0};
    std::vector<int> wavenumbers{1, 3};
    std::string out;
};

int run_gen_data(const GenData& o) {
    Dataset data;
    std::vector<std::string> comments;
    if (o.kind == "torus") {
        TorusSource src;
        if (o.dim) src.dim = o.dim;
        src.amplitude1 = o.amplitudes.at(0);
        src.amplitude2 = o.amplitudes.at(1);
        src.wavenumber1 = o.wavenumbers.at(0);
        src.wavenumber2 = o.wavenumbers.at(1);
        data = torus_grid(src, o.grid);
        comments.push_back(src.describe() + " grid=" + std::to_string(o.grid));
    } else {
        HumpPairSource src;
        src.placement = parse_placement(o.kind);
        if (o.dim) src.dim = o.dim;
        src.half_width = o.half_width;
        src.amplitude = o.amplitude;
        src.offset_min = o.offset_min;
        src.offset_max = o.offset_max;
        data = enumerate_configs(src);
        comments.push_back(src.describe());
    }
    comments.push_back(std::to_string(data.size()) + " vectors, uniform weights");
    if (o.out.empty() || o.out == "-") {
        write_matrix_csv(std::cout, data.vectors, comments);
    } else {
        save_matrix_csv(o.out, data.vectors, comments);
    }
    return 0;
}

// ---- train ------------------------------------------------------------------

struct Train {
    std::string preset;
    std::string schedule;
    DataOptions data;
    std::string out;
    std::string thresholds;
    bool quiet = false;
};

int run_train(const Train& o, std::uint64_t seed) {
    Experiment e;
    if (!o.preset.empty()) {
        e = expand_preset(o.preset, seed);
    } else {
        std::size_t first_dim = 0;
        std::optional<Dataset> file_data;
        if (!o.data.file.empty()) {
            file_data = o.data.load();
            first_dim = file_data->dim();
        }
        e = experiment_from_json(read_file(o.schedule), first_dim);
        e.schedule.seed = seed;
    }
    Dataset data;
    if (!o.data.file.empty() || !o.data.placement.empty()) {
        data = o.data.load();
    } else if (e.source) {
        data = enumerate_configs(*e.source);
    } else {
        throw InvalidInput("the experiment has no source; give --data or --source");
    }

    fs::create_directories(o.out);
    { auto f = open_out(fs::path(o.out) / "experiment.json"); f << experiment_to_json(e); }

    const ChainModel initial = init_model(e.layout, data, e.schedule.seed, e.init_scale);
    const std::size_t total = e.schedule.total_steps();
    StepObserver progress;
    if (!o.quiet) {
        progress = [total](std::size_t step, const ChainModel&) {
            if (step % 100 == 0 || step == total) std::cerr << "\rstep " << step << '/' << total << std::flush;
        };
    }
    const TrainingResult result = train(initial, data, e.schedule, progress);
    if (!o.quiet) std::cerr << '\n';

    save_model(fs::path(o.out) / "model.json", result.model);
    { auto f = open_out(fs::path(o.out) / "trace.csv"); write_trace_csv(f, result.trace); }
    { auto f = open_out(fs::path(o.out) / "snapshots.csv"); write_snapshots_csv(f, result.trace); }
    PlotOptions plot;
    if (e.source) plot.amplitude = e.source->amplitude;
    plot_snapshots(result.trace.snapshots, o.out, plot);

    const ObjectiveReport final_report = chain_objective(result.model, data);
    std::cout << "objective before step 1: " << format_exact(result.trace.reports.front().total) << '\n';
    std::cout << "objective after step " << total << ": " << format_exact(final_report.total) << '\n';

    if (e.source && e.source->dim == result.model.stages.front().dim_in) {
        const ClassifyThresholds th = o.thresholds.empty() ? ClassifyThresholds{} : ClassifyThresholds::load(o.thresholds);
        const EncoderTypeReport report = classify_encoder(result.model, *e.source, th);
        auto f = open_out(fs::path(o.out) / "classify.txt");
        print_report(f, report);
        std::cout << "classification: " << to_string(report.type) << '\n';
    }
    std::cout << "wrote " << o.out << '\n';
    return 0;
}

// ---- eval -------------------------------------------------------------------

struct Eval {
    std::string model;
    DataOptions data;
    std::size_t samples = 0;
};

int run_eval(const Eval& o, std::uint64_t seed) {
    const ChainModel chain = load_model(o.model);
    const Dataset data = o.data.load();
    const ObjectiveReport report = chain_objective(chain, data);
    write_report_csv_header(std::cout, chain.size());
    write_report_csv_row(std::cout, 0, report);
    if (o.samples > 0) {
        Rng rng(seed);
        const DistortionEstimate d = estimate_true_D(chain.stages.front(), data, o.samples, rng);
        std::cout << "# stage 1 distortion estimate " << format_exact(d.mean) << " +- " << format_exact(d.std_error)
                  << '\n';
    }
    return 0;
}

// ---- encode / decode ----------------------------------------------------------

struct Encode {
    std::string model;
    std::string input;
    std::string out;
    std::size_t n = 0;
};

int run_encode(const Encode& o, std::uint64_t seed) {
    const ChainModel chain = load_model(o.model);
    const StageModel& stage = chain.stages.front();
    const Matrix x = read_matrix_csv(fs::path(o.input));
    const std::size_t n = o.n ? o.n : stage.num_samples;
    Rng rng(seed);
    const EncodeResult r = encode(stage, x, n, rng);
    if (o.out.empty() || o.out == "-") {
        write_index_csv(std::cout, r.codes);
    } else {
        auto f = open_out(o.out);
        write_index_csv(f, r.codes);
    }
    std::cerr << "round-trip distortion " << format_exact(r.distortion.mean) << " +- "
              << format_exact(r.distortion.std_error) << " (n=" << n << ", " << x.rows() << " inputs)\n";
    return 0;
}

struct Decode {
    std::string model;
    std::string indices;
    std::string out;
    std::string reference;
};

int run_decode(const Decode& o) {
    const ChainModel chain = load_model(o.model);
    const StageModel& stage = chain.stages.front();
    std::ifstream in(o.indices);
    if (!in) throw InvalidInput("cannot read " + o.indices);
    const Matrix recon = decode(stage, read_index_csv(in));
    if (o.out.empty() || o.out == "-") {
        write_matrix_csv(std::cout, recon);
    } else {
        save_matrix_csv(o.out, recon);
    }
    if (!o.reference.empty()) {
        const Matrix ref = read_matrix_csv(fs::path(o.reference));
        std::cerr << "round-trip distortion " << format_exact(round_trip_distortion(ref, recon)) << '\n';
    }
    return 0;
}

// ---- grad-check / classify / plot -------------------------------------------

struct GradCheck {
    std::string model;
    DataOptions data;
    double step = 1e-5;
    double tol = 1e-4;
};

int run_grad_check(const GradCheck& o) {
    const ChainModel chain = load_model(o.model);
    const FdCheckReport report = finite_difference_check(chain, o.data.load(), o.step, o.tol);
    print_fd_report(std::cout, report);
    return report.passed ? 0 : kExitNumerical;
}

struct Classify {
    std::string model;
    std::string placement = "correlated";
    std::string thresholds;
};

int run_classify(const Classify& o) {
    const ChainModel chain = load_model(o.model);
    HumpPairSource src;
    src.placement = parse_placement(o.placement);
    src.dim = chain.stages.front().dim_in;
    const ClassifyThresholds th = o.thresholds.empty() ? ClassifyThresholds{} : ClassifyThresholds::load(o.thresholds);
    print_report(std::cout, classify_encoder(chain, src, th));
    return 0;
}

struct Plot {
    std::string snapshots;
    std::string out;
    PlotOptions options;
};

int run_plot(const Plot& o) {
    std::ifstream in(o.snapshots);
    if (!in) throw InvalidInput("cannot read " + o.snapshots);
    const auto snaps = read_snapshots_csv(in);
    fs::create_directories(o.out);
    plot_snapshots(snaps, o.out, o.options);
    std::cout << "wrote " << (fs::path(o.out) / "snapshots.pgm").string() << " and snapshots.svg\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stochastic vector quantiser toolkit"};
    app.require_subcommand(1);

    Common common;

    GenData gen;
    auto* c_gen = app.add_subcommand("gen-data", "write an enumerated synthetic dataset as CSV");
    c_gen->add_option("--kind", gen.kind, "independent | correlated | torus")->capture_default_str();
    c_gen->add_option("--dim", gen.dim, "vector length (default 24 for humps, 16 for torus)");
    c_gen->add_option("--half-width", gen.half_width, "hump half width at half maximum")->capture_default_str();
    c_gen->add_option("--amplitude", gen.amplitude, "hump peak amplitude")->capture_default_str();
    c_gen->add_option("--offset-min", gen.offset_min, "correlated placement: smallest offset")->capture_default_str();
    c_gen->add_option("--offset-max", gen.offset_max, "correlated placement: largest offset")->capture_default_str();
    c_gen->add_option("--grid", gen.grid, "torus: phase lattice size per axis")->capture_default_str();
    c_gen->add_option("--amplitudes", gen.amplitudes, "torus: two amplitudes")->expected(2);
    c_gen->add_option("--wavenumbers", gen.wavenumbers, "torus: two wavenumbers")->expected(2);
    c_gen->add_option("-o,--out", gen.out, "output CSV (default stdout)");
    add_seed(c_gen, common, false);

    Train tr;
    auto* c_train = app.add_subcommand("train", "train a model from a preset or an experiment file");
    auto* o_preset = c_train->add_option("--preset", tr.preset, "named experiment preset");
    auto* o_sched = c_train->add_option("--schedule", tr.schedule, "experiment JSON file");
    o_preset->excludes(o_sched);
    tr.data.add(c_train);
    c_train->add_option("--out", tr.out, "output directory")->required();
    c_train->add_option("--thresholds", tr.thresholds, "classifier thresholds JSON");
    c_train->add_flag("--quiet", tr.quiet, "no progress output");
    add_seed(c_train, common, true);

    Eval ev;
    auto* c_eval = app.add_subcommand("eval", "evaluate the chain objective of a model");
    c_eval->add_option("--model", ev.model, "model JSON")->required();
    ev.data.add(c_eval);
    c_eval->add_option("--samples", ev.samples, "also estimate stage-1 distortion with this many draws per input");
    add_seed(c_eval, common, false);

    Encode enc;
    auto* c_enc = app.add_subcommand("encode", "sample code indices for input vectors (first stage)");
    c_enc->add_option("--model", enc.model, "model JSON")->required();
    c_enc->add_option("--input", enc.input, "input vectors CSV")->required();
    c_enc->add_option("-o,--out", enc.out, "index CSV (default stdout)");
    c_enc->add_option("--n-samples", enc.n, "indices per input (default: the stage's n)");
    add_seed(c_enc, common, true);

    Decode dec;
    auto* c_dec = app.add_subcommand("decode", "reconstruct vectors from code indices (first stage)");
    c_dec->add_option("--model", dec.model, "model JSON")->required();
    c_dec->add_option("--indices", dec.indices, "index CSV")->required();
    c_dec->add_option("-o,--out", dec.out, "output CSV (default stdout)");
    c_dec->add_option("--reference", dec.reference, "original vectors CSV; reports the round-trip distortion");
    add_seed(c_dec, common, false);

    GradCheck gc;
    auto* c_gc = app.add_subcommand("grad-check", "compare analytic and finite-difference gradients");
    c_gc->add_option("--model", gc.model, "model JSON")->required();
    gc.data.add(c_gc);
    c_gc->add_option("--step", gc.step, "central difference step")->capture_default_str();
    c_gc->add_option("--tol", gc.tol, "largest accepted relative error")->capture_default_str();
    add_seed(c_gc, common, false);

    Classify cl;
    auto* c_cl = app.add_subcommand("classify", "label the first stage as factorial, joint or invariant");
    c_cl->add_option("--model", cl.model, "model JSON")->required();
    c_cl->add_option("--source", cl.placement, "hump-pair placement to probe with")->capture_default_str();
    c_cl->add_option("--thresholds", cl.thresholds, "classifier thresholds JSON");
    add_seed(c_cl, common, false);

    Plot pl;
    auto* c_plot = app.add_subcommand("plot", "render reconstruction vector snapshots as PGM and SVG");
    c_plot->add_option("--snapshots", pl.snapshots, "snapshots CSV written by train")->required();
    c_plot->add_option("--out", pl.out, "output directory")->required();
    c_plot->add_option("--stage", pl.options.stage, "stage to draw")->capture_default_str();
    c_plot->add_option("--amplitude", pl.options.amplitude, "grey scale spans [0, 2*amplitude]")->capture_default_str();
    c_plot->add_option("--cell", pl.options.cell, "pixels per component")->capture_default_str();
    add_seed(c_plot, common, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInvalid;
    }

    try {
        const std::uint64_t seed = common.seed.value_or(0);
        if (c_gen->parsed()) return run_gen_data(gen);
        if (c_train->parsed()) {
            if (tr.preset.empty() == tr.schedule.empty()) throw InvalidInput("give exactly one of --preset, --schedule");
            return run_train(tr, seed);
        }
        if (c_eval->parsed()) return run_eval(ev, seed);
        if (c_enc->parsed()) return run_encode(enc, seed);
        if (c_dec->parsed()) return run_decode(dec);
        if (c_gc->parsed()) return run_grad_check(gc);
        if (c_cl->parsed()) return run_classify(cl);
        if (c_plot->parsed()) return run_plot(pl);
    } catch (const NumericalFailure& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalid;
    }
    return kExitInvalid;
}

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "qlane/evaluation.hpp"
#include "qlane/pipeline.hpp"
#include "qlane/report.hpp"
#include "qlane/synthetic.hpp"

namespace fs = std::filesystem;
using namespace qlane;

namespace {

struct DetectOptions {
    std::string input;
    std::string out;
    double s1 = 3.0;
    double s2 = 20.0;
    std::string freq_unit = "cycles";
    double percentile = 5.0;
    std::string scheme = "central";
    std::string formula = "corrected";
    double rho_res = 1.0;
    double theta_res_deg = 1.0;
    int vote_threshold = 50;
    double min_len = 50.0;
    double max_gap = 10.0;
    double slope_min = 0.36397023426620234;
    double slope_max = 5.671281819617709;
    std::uint64_t seed = 0;
    std::vector<std::string> emit{"json"};
    unsigned jobs = 1;
    bool no_timings = false;
};

const std::map<std::string, Emit> kEmitNames{
    {"edges", Emit::edges}, {"lines", Emit::lines}, {"overlay", Emit::overlay}, {"json", Emit::json}};

const std::map<std::string, FrequencyUnit> kUnitNames{{"cycles", FrequencyUnit::cycles_per_pixel},
                                                      {"angular", FrequencyUnit::angular_normalized},
                                                      {"index", FrequencyUnit::raw_index}};

PipelineConfig to_config(const DetectOptions& o) {
    PipelineConfig cfg;
    cfg.hardy = {o.s1, o.s2, kUnitNames.at(o.freq_unit)};
    cfg.grad.scheme = o.scheme == "sobel" ? DerivativeScheme::sobel : DerivativeScheme::central;
    cfg.grad.formula = o.formula == "literal" ? GradientFormula::literal : GradientFormula::corrected;
    cfg.grad.threshold = TopPercentile{o.percentile};
    cfg.hough.rho_res = o.rho_res;
    cfg.hough.theta_res = o.theta_res_deg * std::numbers::pi / 180.0;
    cfg.hough.vote_threshold = o.vote_threshold;
    cfg.hough.min_len = o.min_len;
    cfg.hough.max_gap = o.max_gap;
    cfg.hough.rng_seed = o.seed;
    cfg.slope_band = {o.slope_min, o.slope_max};
    cfg.emit.clear();
    for (const auto& e : o.emit) cfg.emit.push_back(kEmitNames.at(e));
    cfg.validate();
    return cfg;
}

bool is_image_file(const fs::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext == ".png" || ext == ".ppm" || ext == ".pnm" || ext == ".pgm";
}

std::vector<fs::path> collect_inputs(const fs::path& input) {
    if (!fs::is_directory(input)) return {input};
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(input)) {
        if (entry.is_regular_file() && is_image_file(entry.path())) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    return files;
}

struct FrameOutput {
    std::string json;
    std::vector<std::pair<fs::path, Bytes>> images;
    std::string error;
};

FrameOutput process(const fs::path& file, const PipelineConfig& cfg, const DetectOptions& o) {
    FrameOutput out;
    try {
        const Bytes bytes = read_file(file);
        const DetectionResult r = run(bytes, cfg, file.filename().string());
        const bool drawing = std::any_of(cfg.emit.begin(), cfg.emit.end(), [](Emit e) { return e != Emit::json; });
        const RgbImage img = drawing ? decode_image(bytes) : RgbImage{};
        const std::string stem = file.stem().string();
        const fs::path dir = o.out.empty() ? fs::path{} : fs::path(o.out);
        for (Emit e : cfg.emit) {
            switch (e) {
            case Emit::json:
                out.json = to_json(r, ReportOptions{!o.no_timings, 2});
                break;
            case Emit::edges:
                out.images.emplace_back(dir / (stem + "_edges.png"), encode_png(mask_to_image(r.edges)));
                break;
            case Emit::lines:
                out.images.emplace_back(dir / (stem + "_lines.png"), encode_png(lines_image(img, r)));
                break;
            case Emit::overlay:
                out.images.emplace_back(dir / (stem + "_overlay.png"), emit_overlay(img, r));
                break;
            }
        }
    } catch (const std::exception& e) {
        out.error = file.string() + ": " + e.what();
    }
    return out;
}

int cmd_detect(const DetectOptions& o) {
    const PipelineConfig cfg = to_config(o);
    const bool wants_images = std::any_of(cfg.emit.begin(), cfg.emit.end(), [](Emit e) { return e != Emit::json; });
    if (wants_images && o.out.empty()) {
        std::cerr << "qlane: --emit edges|lines|overlay needs --out DIR\n";
        return 2;
    }
    const auto files = collect_inputs(o.input);
    if (files.empty()) {
        std::cerr << "qlane: no PNG/PPM inputs in " << o.input << "\n";
        return 2;
    }
    if (!o.out.empty()) fs::create_directories(o.out);

    // Frames are independent; results land in input order.
    std::vector<FrameOutput> results(files.size());
    std::atomic<std::size_t> next{0};
    const unsigned workers = std::max(1u, std::min<unsigned>(o.jobs, static_cast<unsigned>(files.size())));
    auto work = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < files.size();) results[i] = process(files[i], cfg, o);
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < workers; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();

    int status = 0;
    for (std::size_t i = 0; i < files.size(); ++i) {
        const FrameOutput& r = results[i];
        if (!r.error.empty()) {
            std::cerr << "qlane: " << r.error << "\n";
            status = 1;
            continue;
        }
        if (!r.json.empty()) {
            if (o.out.empty()) {
                std::cout << r.json;
            } else {
                write_file(fs::path(o.out) / (files[i].stem().string() + ".json"), r.json);
            }
        }
        for (const auto& [path, bytes] : r.images) write_file(path, bytes);
    }
    return status;
}

int cmd_eval(const std::string& pred, const std::string& truth_file, const MatchTolerance& tol) {
    const Bytes tb = read_file(truth_file);
    const GroundTruth gt = parse_truth_jsonl(std::string(tb.begin(), tb.end()));
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(pred)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<DetectionResult> results;
    for (const auto& f : files) {
        const Bytes b = read_file(f);
        results.push_back(result_from_json(std::string(b.begin(), b.end())));
    }
    if (results.empty()) {
        std::cerr << "qlane: no prediction files in " << pred << "\n";
        return 2;
    }
    const RateSummary s = evaluate(results, gt, tol);
    std::printf("DR = %.1f%% (%zu/%zu frames)\n", s.rate, s.correct, s.total);
    return 0;
}

int cmd_synth(const std::string& out, std::size_t count, double max_sigma, std::uint64_t seed,
              const std::vector<std::size_t>& blank) {
    fs::create_directories(out);
    std::vector<FrameTruth> truth;
    for (std::size_t i = 0; i < count; ++i) {
        synthetic::SceneParams sp = synthetic::suite_scene(i, count, max_sigma, seed);
        const auto scene = synthetic::make_road_scene(sp);
        RgbImage img = scene.image;
        if (std::find(blank.begin(), blank.end(), i) != blank.end()) {
            sp.left_mark = sp.ground;
            sp.right_mark = sp.ground;
            img = synthetic::make_road_scene(sp).image;
        }
        char name[32];
        std::snprintf(name, sizeof name, "scene_%03zu.png", i);
        write_file(fs::path(out) / name, encode_png(img));
        truth.push_back({name, scene.lanes});
    }
    write_file(fs::path(out) / "truth.jsonl", truth_to_jsonl(truth));
    std::printf("wrote %zu scenes and truth.jsonl to %s\n", count, out.c_str());
    return 0;
}

// Lines of `name = value`, where name is a long option without its dashes.
// Blank lines and lines starting with '#' or ';' are skipped. Options given
// on the command line win.
void apply_config_file(CLI::App& cmd, const std::string& path) {
    std::ifstream in(path);
    std::string line;
    std::size_t lineno = 0;
    auto trim = [](std::string v) {
        const auto b = v.find_first_not_of(" \t\r");
        if (b == std::string::npos) return std::string{};
        return v.substr(b, v.find_last_not_of(" \t\r") - b + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": expected name = value");
        }
        const std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        CLI::Option* opt = cmd.get_option_no_throw("--" + key);
        if (opt == nullptr || key == "config") {
            throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": unknown option '" + key + "'");
        }
        if (opt->count() > 0) continue;
        if (opt->get_expected_max() > 1) {
            for (std::size_t start = 0;;) {
                const auto comma = value.find(',', start);
                opt->add_result(trim(value.substr(start, comma - start)));
                if (comma == std::string::npos) break;
                start = comma + 1;
            }
        } else {
            opt->add_result(value);
        }
        opt->run_callback();
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lane detection with a quaternion Hardy filter"};
    app.require_subcommand(1);

    DetectOptions o;
    auto* detect = app.add_subcommand("detect", "Detect lane lines in an image or a directory of images");
    std::string config_file;
    detect->add_option("--config", config_file, "Read options from a key = value file (flags override it)")
        ->check(CLI::ExistingFile);
    detect->add_option("input", o.input, "PNG/PPM file or directory")->required();
    detect->add_option("--out", o.out, "Output directory (JSON goes to stdout when omitted)");
    detect->add_option("--s1", o.s1, "Poisson scale along rows")->capture_default_str();
    detect->add_option("--s2", o.s2, "Poisson scale along columns")->capture_default_str();
    detect->add_option("--freq-unit", o.freq_unit, "Frequency unit in the damping: cycles, angular or index")
        ->check(CLI::IsMember({"cycles", "angular", "index"}))
        ->capture_default_str();
    detect->add_option("--percentile", o.percentile, "Keep the strongest P percent of gradient pixels")
        ->capture_default_str();
    detect->add_option("--scheme", o.scheme, "Derivative stencil")
        ->check(CLI::IsMember({"central", "sobel"}))
        ->capture_default_str();
    detect->add_option("--formula", o.formula, "Gradient formula")
        ->check(CLI::IsMember({"corrected", "literal"}))
        ->capture_default_str();
    detect->add_option("--rho-res", o.rho_res, "Accumulator rho step, pixels")->capture_default_str();
    detect->add_option("--theta-res", o.theta_res_deg, "Accumulator theta step, degrees")->capture_default_str();
    detect->add_option("--vote-threshold", o.vote_threshold, "Votes needed to follow a line")->capture_default_str();
    detect->add_option("--min-len", o.min_len, "Shortest segment kept, pixels")->capture_default_str();
    detect->add_option("--max-gap", o.max_gap, "Longest gap bridged, pixels")->capture_default_str();
    detect->add_option("--slope-min", o.slope_min, "Smallest |dy/dx| accepted as a lane")->capture_default_str();
    detect->add_option("--slope-max", o.slope_max, "Largest |dy/dx| accepted as a lane")->capture_default_str();
    detect->add_option("--seed", o.seed, "Seed for the Hough sampling order")->capture_default_str();
    detect->add_option("--emit", o.emit, "Outputs: edges, lines, overlay, json (repeatable)")
        ->check(CLI::IsMember({"edges", "lines", "overlay", "json"}))
        ->delimiter(',')
        ->capture_default_str();
    detect->add_option("-j,--jobs", o.jobs, "Images processed in parallel")->check(CLI::PositiveNumber);
    detect->add_flag("--no-timings", o.no_timings, "Leave per-stage timings out of the JSON");

    std::string pred, truth;
    MatchTolerance tol;
    auto* eval = app.add_subcommand("eval", "Score prediction JSON files against ground truth");
    eval->add_option("--pred", pred, "Directory of detect JSON output")->required()->check(CLI::ExistingDirectory);
    eval->add_option("--truth", truth, "Ground truth, one JSON object per line")->required()->check(CLI::ExistingFile);
    eval->add_option("--angle-tol", tol.angle_deg, "Angle tolerance, degrees")->capture_default_str();
    eval->add_option("--dist-tol", tol.dist_px, "Midpoint distance tolerance, pixels")->capture_default_str();

    std::string synth_out;
    std::size_t synth_count = 20;
    double synth_sigma = 30.0;
    std::uint64_t synth_seed = 1;
    std::vector<std::size_t> synth_blank;
    auto* synth = app.add_subcommand("synth", "Write synthetic road scenes and their ground truth");
    synth->add_option("--out", synth_out, "Output directory")->required();
    synth->add_option("--count", synth_count, "Number of scenes")->capture_default_str();
    synth->add_option("--max-sigma", synth_sigma, "Noise level of the last scene")->capture_default_str();
    synth->add_option("--seed", synth_seed, "Scene seed")->capture_default_str();
    synth->add_option("--blank", synth_blank, "Scene indices drawn without markings")->delimiter(',');

    CLI11_PARSE(app, argc, argv);

    try {
        if (*detect && !config_file.empty()) apply_config_file(*detect, config_file);
        if (*detect) return cmd_detect(o);
        if (*eval) return cmd_eval(pred, truth, tol);
        if (*synth) return cmd_synth(synth_out, synth_count, synth_sigma, synth_seed, synth_blank);
    } catch (const std::exception& e) {
        std::cerr << "qlane: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

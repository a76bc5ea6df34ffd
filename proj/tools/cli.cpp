#include "cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <map>
#include <memory>

#include "courtrack/errors.hpp"
#include "courtrack/eval.hpp"
#include "courtrack/io.hpp"
#include "courtrack/synth.hpp"

namespace courtrack::cli {

namespace fs = std::filesystem;

MatchConfig RunConfig::match_config() const {
    MatchConfig mc;
    mc.gate = gate;
    mc.memory_depth = memory_depth;
    mc.weights = CostWeights::make(alpha, beta);
    mc.patch = PatchWindow::make(patch_half_extent);
    mc.validate();
    return mc;
}

namespace {

void require(const std::string& value, const char* flag) {
    if (value.empty()) {
        throw std::invalid_argument(std::string("missing required flag ") + flag);
    }
}

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
    if (cfg.out.empty()) {
        out << text;
    } else {
        io::write_text(cfg.out, text);
    }
}

std::optional<CourtRegion> court_for(const RunConfig& cfg, const FrameRaster& first) {
    if (!cfg.court_json.empty()) {
        return io::read_court_json(cfg.court_json, first.dims());
    }
    if (cfg.court == CourtVariant::None) {
        return std::nullopt;
    }
    require(cfg.segments, "--segments");
    const auto segments = io::read_segments_csv(cfg.segments);
    CourtOptions opts;
    opts.candidates = static_cast<std::size_t>(cfg.candidates);
    opts.nba.step = cfg.step;
    if (cfg.court == CourtVariant::European) {
        return detect_court_european(segments, first, io::parse_hsv_filter(cfg.hsv), opts);
    }
    require(cfg.mask, "--mask");
    return detect_court_nba(segments, io::read_pgm_mask(cfg.mask), opts);
}

FrameBoxes boxes_by_frame(const std::vector<GroundTruthBox>& rows) {
    FrameBoxes out;
    for (const auto& r : rows) {
        out[r.frame].push_back(r.bbox);
    }
    return out;
}

}  // namespace

int cmd_track(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    require(cfg.frames, "--frames");
    require(cfg.detections, "--detections");
    require(cfg.homographies, "--homographies");
    const MatchConfig mc = cfg.match_config();

    const auto hmap = io::read_homographies_json(cfg.homographies);
    const auto dets = io::read_detections_jsonl(cfg.detections);
    const auto rasters = io::read_frame_directory(cfg.frames);
    const int n = static_cast<int>(rasters.size());

    for (const auto& d : dets) {
        if (d.frame >= n) {
            throw io::IoError(cfg.detections + ": detection on frame " + std::to_string(d.frame) +
                              " but " + cfg.frames + " holds " + std::to_string(n) + " frames");
        }
    }
    if (dets.empty()) {
        emit(cfg, io::mot_csv({}), out);
        return kOk;
    }

    const auto hs = io::resolve_homographies(hmap, n);
    for (const int t : hs.missing) {
        err << "warning: no homography for frame " << t << ", using identity\n";
    }
    const auto court = court_for(cfg, rasters.front());

    std::vector<SequenceFrame> seq(static_cast<std::size_t>(n));
    for (int t = 0; t < n; ++t) {
        auto& f = seq[static_cast<std::size_t>(t)];
        f.index = t;
        f.homography = hs.per_frame[static_cast<std::size_t>(t)];
        f.frame = std::make_shared<const FrameRaster>(rasters[static_cast<std::size_t>(t)]);
    }
    for (const auto& d : dets) {
        seq[static_cast<std::size_t>(d.frame)].detections.push_back(d.detection);
    }
    if (court) {
        for (auto& f : seq) {
            f.detections = filter_by_court(f.detections, *court);
        }
    }

    const auto tracks = run_tracker(seq, mc);
    emit(cfg, io::mot_csv(tracks_to_boxes(tracks)), out);
    return kOk;
}

int cmd_eval(const RunConfig& cfg, std::ostream& out, std::ostream&) {
    require(cfg.gt, "--gt");
    require(cfg.hyp, "--hyp");
    const auto gt = io::read_mot_csv(cfg.gt);
    if (gt.empty()) {
        throw EmptyGroundTruth(cfg.gt + ": no ground-truth rows");
    }
    const bool jsonl = fs::path(cfg.hyp).extension() == ".jsonl";

    if (cfg.mode == "det") {
        FrameBoxes boxes;
        if (jsonl) {
            for (const auto& d : io::read_detections_jsonl(cfg.hyp)) {
                boxes[d.frame].push_back(d.detection.bbox());
            }
        } else {
            boxes = boxes_by_frame(io::read_mot_csv(cfg.hyp));
        }
        emit(cfg, io::report_to_json(eval_detections(gt, boxes)), out);
        return kOk;
    }
    if (jsonl) {
        throw std::invalid_argument("mot evaluation needs a track CSV with ids, not detections");
    }
    MotOptions opts;
    opts.match_iou = cfg.mot_iou;
    emit(cfg, io::report_to_json(eval_mot(gt, io::read_mot_csv(cfg.hyp), opts)), out);
    return kOk;
}

int cmd_court(const RunConfig& cfg, std::ostream& out, std::ostream&) {
    require(cfg.segments, "--segments");
    const auto segments = io::read_segments_csv(cfg.segments);
    CourtOptions opts;
    opts.candidates = static_cast<std::size_t>(cfg.candidates);
    opts.nba.step = cfg.step;

    CourtRegion region;
    switch (cfg.court) {
        case CourtVariant::European: {
            require(cfg.frame, "--frame");
            const auto frame = io::read_ppm(cfg.frame);
            region = detect_court_european(segments, frame, io::parse_hsv_filter(cfg.hsv), opts);
            break;
        }
        case CourtVariant::Nba:
            require(cfg.mask, "--mask");
            region = detect_court_nba(segments, io::read_pgm_mask(cfg.mask), opts);
            break;
        case CourtVariant::None:
            throw std::invalid_argument("court needs --court european or --court nba");
    }
    emit(cfg, io::court_to_json(region), out);
    return kOk;
}

int cmd_synth(const RunConfig& cfg, std::ostream&, std::ostream&) {
    require(cfg.out, "--out");
    ScenarioSpec spec;
    spec.n_targets = cfg.n_targets;
    spec.n_frames = cfg.n_frames;
    spec.dims = FrameDims::make(cfg.width, cfg.height);
    spec.max_speed = cfg.speed;
    spec.pan = {cfg.pan_x, cfg.pan_y};
    spec.dropout_rate = cfg.dropout;
    spec.jitter_sigma = cfg.jitter;
    spec.seed = cfg.seed;

    SyntheticSequence seq = generate(spec);
    if (cfg.extra_dropout > 0.0) {
        seq = degrade(seq, cfg.extra_dropout, cfg.seed);
    }
    io::write_scenario(seq, cfg.out);
    return kOk;
}

namespace {

template <typename F>
int guarded(F&& body, std::ostream& err) {
    try {
        return body();
    } catch (const FormatError& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const io::IoError& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const NoSegments& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const TargetOutOfFrame& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const Error& e) {
        // degenerate results: empty ground truth, court collapse, no candidates, ...
        err << "error: " << e.what() << '\n';
        return kDegenerate;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Player tracking on stabilized sports footage"};
    app.name(args.empty() ? "courtrack" : fs::path(args.front()).filename().string());
    app.config_formatter(std::make_shared<CLI::ConfigINI>());
    app.set_config("--config", "", "flat key=value file; command-line flags take precedence");
    app.fallthrough();
    app.require_subcommand(1);

    app.add_option("--alpha", cfg.alpha, "weight of the centroid distance term");
    app.add_option("--beta", cfg.beta, "weight of the overlap term");
    app.add_option("--gate", cfg.gate, "maximum accepted match cost");
    app.add_option("--memory", cfg.memory_depth, "frames a track stays matchable")
        ->check(CLI::IsMember({1, 2}));
    app.add_option("--patch", cfg.patch_half_extent, "patch half extent in pixels");
    app.add_option("--dup-iou", cfg.duplicate_iou, "duplicate detection IoU");
    app.add_option("--mot-iou", cfg.mot_iou, "CLEAR-MOT correspondence IoU");
    const std::map<std::string, CourtVariant> variants{
        {"none", CourtVariant::None}, {"european", CourtVariant::European}, {"nba", CourtVariant::Nba}};
    app.add_option("--court", cfg.court, "court variant: european, nba or none")
        ->transform(CLI::CheckedTransformer(variants, CLI::ignore_case));
    app.add_option("--hsv", cfg.hsv, "colour filter h0:h1,s0:s1,v0:v1");
    app.add_option("--step", cfg.step, "nba boundary step in pixels");
    app.add_option("--candidates", cfg.candidates, "voted lines handed to the selectors");
    app.add_option("--seed", cfg.seed, "random seed");

    app.add_option("--frames", cfg.frames, "directory of frame_%06d.ppm files");
    app.add_option("--detections", cfg.detections, "detections JSONL");
    app.add_option("--homographies", cfg.homographies, "homographies JSON");
    app.add_option("--segments", cfg.segments, "line segments CSV");
    app.add_option("--frame", cfg.frame, "single PPM frame (european court)");
    app.add_option("--mask", cfg.mask, "people mask PGM (nba court)");
    app.add_option("--court-json", cfg.court_json, "precomputed court JSON");
    app.add_option("--gt", cfg.gt, "ground truth CSV");
    app.add_option("--hyp", cfg.hyp, "hypothesis CSV or detections JSONL");
    app.add_option("--out", cfg.out, "output file or directory");
    app.add_option("--mode", cfg.mode, "evaluation mode")->check(CLI::IsMember({"det", "mot"}));

    app.add_option("--n-targets", cfg.n_targets, "synthetic targets");
    app.add_option("--n-frames", cfg.n_frames, "synthetic frames");
    app.add_option("--width", cfg.width, "synthetic frame width");
    app.add_option("--height", cfg.height, "synthetic frame height");
    app.add_option("--pan-x", cfg.pan_x, "camera pan, px/frame");
    app.add_option("--pan-y", cfg.pan_y, "camera pan, px/frame");
    app.add_option("--dropout", cfg.dropout, "independent detection dropout rate");
    app.add_option("--extra-dropout", cfg.extra_dropout, "single-frame dropout rate");
    app.add_option("--jitter", cfg.jitter, "box corner noise, px");
    app.add_option("--speed", cfg.speed, "maximum target speed, px/frame");

    auto* track = app.add_subcommand("track", "link detections into tracks");
    auto* eval = app.add_subcommand("eval", "score detections or tracks against ground truth");
    auto* court = app.add_subcommand("court", "estimate the court boundaries");
    auto* synth = app.add_subcommand("synth", "write a synthetic scenario");

    std::vector<std::string> rev(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
    std::reverse(rev.begin(), rev.end());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInputError;
    }

    return guarded(
        [&] {
            if (track->parsed()) return cmd_track(cfg, out, err);
            if (eval->parsed()) return cmd_eval(cfg, out, err);
            if (court->parsed()) return cmd_court(cfg, out, err);
            if (synth->parsed()) return cmd_synth(cfg, out, err);
            return static_cast<int>(kInputError);
        },
        err);
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    return run(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace courtrack::cli

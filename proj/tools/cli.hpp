#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "courtrack/court.hpp"
#include "courtrack/cost.hpp"
#include "courtrack/track.hpp"

namespace courtrack::cli {

enum ExitCode : int {
    kOk = 0,
    kInputError = 1,
    kDegenerate = 2,
};

enum class CourtVariant { None, European, Nba };

/// Everything a command needs. Filled from defaults, then the config file,
/// then command-line flags.
struct RunConfig {
    double alpha = 0.65;
    double beta = 0.05;
    double gate = 0.5;
    int memory_depth = 2;
    int patch_half_extent = 12;
    double duplicate_iou = 0.5;
    double mot_iou = 0.5;
    CourtVariant court = CourtVariant::None;
    std::string hsv = "0:360,0:1,0:1";
    double step = 2.0;
    int candidates = 10;
    std::uint64_t seed = 1;

    std::string frames;
    std::string detections;
    std::string homographies;
    std::string segments;
    std::string frame;
    std::string mask;
    std::string court_json;
    std::string gt;
    std::string hyp;
    std::string out;
    std::string mode = "mot";

    // synth
    int n_targets = 10;
    int n_frames = 40;
    int width = 960;
    int height = 540;
    double pan_x = 3.0;
    double pan_y = 0.0;
    double dropout = 0.0;
    double extra_dropout = 0.0;
    double jitter = 0.0;
    double speed = 1.0;

    MatchConfig match_config() const;
};

int cmd_track(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_eval(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_court(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_synth(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Parses arguments (first element is the program name), dispatches the
/// subcommand, and maps errors to exit codes.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace courtrack::cli

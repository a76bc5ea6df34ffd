#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <utility>
#include <vector>

#include "courtrack/assignment.hpp"
#include "courtrack/detect.hpp"
#include "courtrack/eval.hpp"
#include "courtrack/imaging.hpp"
#include "courtrack/track.hpp"

namespace courtrack {

/// Portable seeded randomness: SplitMix64-derived stream seeds feeding
/// std::mt19937_64 (whose output sequence is fixed by the standard). Uniform
/// and normal draws are written out here because the std distributions are
/// implementation-defined.
class RandomStream {
public:
    /// Independent stream for (seed, purpose, frame, target).
    RandomStream(std::uint64_t seed, std::uint64_t purpose, std::uint64_t frame = 0,
                 std::uint64_t target = 0);

    std::uint64_t next_u64();
    /// Uniform in [0, 1) with 53 random bits.
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Standard normal via Box-Muller.
    double normal();

private:
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t& state);

struct ScenarioSpec {
    int n_targets = 10;
    int n_frames = 40;
    FrameDims dims{960, 540};
    /// Per-target velocity in px/frame. Empty: drawn from the seed in
    /// [-max_speed, max_speed] per axis.
    std::vector<Point2> velocities;
    double max_speed = 1.0;
    Point2 pan{3.0, 0.0};  ///< camera translation, px/frame
    double dropout_rate = 0.0;
    double jitter_sigma = 0.0;
    std::uint64_t seed = 1;
    double box_w = 40.0;
    double box_h = 80.0;
    Rgb background{96, 96, 96};

    void validate() const;
};

/// Part ids and relative box positions of the synthetic skeleton.
struct StencilPoint {
    int part_id;
    double u;
    double v;
};
inline constexpr StencilPoint kStencil[] = {
    {0, 0.5, 0.0}, {5, 0.0, 0.3}, {6, 1.0, 0.3}, {11, 0.25, 1.0}, {12, 0.75, 1.0},
};

/// Detection carrying the id of the target that produced it.
struct LabeledDetection {
    int target_id;
    Detection detection;
};

struct SyntheticSequence {
    ScenarioSpec spec;
    std::vector<GroundTruthBox> gt;
    std::vector<std::vector<LabeledDetection>> detections;  ///< per frame
    std::vector<Homography> homographies;                   ///< per frame
    std::vector<std::shared_ptr<const FrameRaster>> frames; ///< per frame
    std::vector<Rgb> colors;                                ///< per target

    /// Tracker input view.
    std::vector<SequenceFrame> to_sequence() const;
    std::size_t detection_count() const;
};

/// Skeleton with the stencil keypoints spanning `box` exactly.
Detection stencil_detection(const BBox& box, Stage stage = Stage::External);

/// Deterministic scenario. Throws TargetOutOfFrame if a target would leave the
/// frame.
SyntheticSequence generate(const ScenarioSpec& spec);

/// Exhaustive minimum over all injections of the smaller side into the larger;
/// the lexicographically first optimum is kept. Throws TooLarge above 9.
std::pair<Assignment, double> brute_force_assignment(const CostMatrix& m);

/// Removes extra interior single-frame detections at a long-run rate of about
/// `extra_dropout`, never creating a gap longer than one frame per target.
SyntheticSequence degrade(const SyntheticSequence& seq, double extra_dropout, std::uint64_t seed);

}  // namespace courtrack

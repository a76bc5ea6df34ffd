#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "courtrack/court.hpp"
#include "courtrack/geometry.hpp"
#include "courtrack/imaging.hpp"

namespace courtrack {

inline constexpr int kMaxPartId = 16;

struct Keypoint {
    int part_id = 0;
    Point2 position;
    double confidence = 1.0;

    friend bool operator==(const Keypoint&, const Keypoint&) = default;
};

enum class Stage { Coarse, Refined, Sliding, External };

std::string_view to_string(Stage s);
/// Throws std::invalid_argument for unknown names.
Stage stage_from_string(std::string_view name);

/// Tight axis-aligned box over keypoint positions. Throws EmptyKeypoints.
BBox skeleton_bbox(const std::vector<Keypoint>& keypoints);

/// Person hypothesis. The box is always the skeleton box of the keypoints.
class Detection {
public:
    /// Validates part ids (in [0, 16], unique), confidences and positions.
    Detection(std::vector<Keypoint> keypoints, Stage stage = Stage::External);

    const std::vector<Keypoint>& keypoints() const { return keypoints_; }
    const BBox& bbox() const { return bbox_; }
    Stage stage() const { return stage_; }
    double mean_confidence() const;

    /// Same skeleton, keypoints mapped through `f`.
    template <typename F>
    Detection mapped(F&& f, Stage stage) const {
        std::vector<Keypoint> kps = keypoints_;
        for (auto& k : kps) {
            k.position = f(k.position);
        }
        return Detection(std::move(kps), stage);
    }

    friend bool operator==(const Detection&, const Detection&) = default;

private:
    std::vector<Keypoint> keypoints_;
    BBox bbox_;
    Stage stage_;
};

/// What the pose detector is asked to look at.
struct DetectorQuery {
    const FrameRaster& content;  ///< window pixels (already resampled)
    Point2 origin;               ///< window origin in frame coordinates
    double scale = 1.0;          ///< content pixels per frame pixel
};

/// Pluggable pose detector. Returns detections in the coordinates of
/// `query.content`; the engine maps them back to frame coordinates as
/// origin + p / scale. Must be deterministic.
using DetectorContract = std::function<std::vector<Detection>(const DetectorQuery&)>;

struct ScalePlan {
    int model_w = 432;
    int model_h = 368;
    double coarse_scale = 0.45;
    double overlap = 0.5;

    /// Width-anchored plan: the coarse pass sees the frame at twice the model
    /// width with the aspect ratio preserved.
    static ScalePlan for_frame(FrameDims dims);
    void validate() const;
    int stride_x() const;
    int stride_y() const;
};

struct DetectOptions {
    double duplicate_iou = 0.5;  ///< IoU at or above which two detections are duplicates
    bool parallel = false;       ///< query windows concurrently (detector must be thread-safe)
};

/// Dimensions the coarse pass resamples the frame to.
FrameDims coarse_dims(FrameDims frame, const ScalePlan& plan);

/// Stage 1A: one query on the downscaled frame.
std::vector<Detection> coarse_pass(const FrameRaster& frame, const DetectorContract& det,
                                   const ScalePlan& plan);

/// Model-sized window centred on `center`, clamped to the frame. Returns the
/// integer origin.
std::pair<int, int> refine_window_origin(Point2 center, FrameDims frame, const ScalePlan& plan);

/// Stage 1B: one full-resolution query per coarse detection, centred on its box.
std::vector<Detection> refine_pass(const FrameRaster& frame, const std::vector<Detection>& coarse,
                                   const DetectorContract& det, const ScalePlan& plan,
                                   const DetectOptions& opts = {});

/// Window origins of the sliding grid along one axis: 0, stride, 2*stride, ...
/// plus a final origin flush with the far edge when the grid falls short.
std::vector<int> sliding_origins(int frame_extent, int window_extent, int stride);

/// Stage 2: full-resolution sliding window scan.
std::vector<Detection> sliding_pass(const FrameRaster& frame, const DetectorContract& det,
                                    const ScalePlan& plan, const DetectOptions& opts = {});

/// True when `a` is the better representative of a duplicate pair: more
/// keypoints, then higher mean confidence.
bool better_detection(const Detection& a, const Detection& b);

/// Removes duplicates inside one list, keeping the better representative of each
/// duplicate group (input order breaks remaining ties). Survivors keep their
/// relative order.
std::vector<Detection> dedup_detections(const std::vector<Detection>& dets,
                                        double duplicate_iou = 0.5);

/// All of `primary`, plus each member of `extra` whose IoU with every primary
/// member is below the duplicate threshold.
std::vector<Detection> merge_detections(const std::vector<Detection>& primary,
                                        const std::vector<Detection>& extra,
                                        double duplicate_iou = 0.5);

/// Keeps detections whose box bottom-centre lies in the court.
std::vector<Detection> filter_by_court(const std::vector<Detection>& dets,
                                       const CourtRegion& region);

/// Per-stage outputs of the full multi-scale strategy.
struct MultiScaleResult {
    std::vector<Detection> coarse;
    std::vector<Detection> refined;
    std::vector<Detection> sliding;
    std::vector<Detection> merged;  ///< (refined + coarse) merged with sliding
};

MultiScaleResult detect_multiscale(const FrameRaster& frame, const DetectorContract& det,
                                   const ScalePlan& plan, const DetectOptions& opts = {});

}  // namespace courtrack

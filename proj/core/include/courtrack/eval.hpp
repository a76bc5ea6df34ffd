#pragma once

#include <map>
#include <vector>

#include "courtrack/geometry.hpp"
#include "courtrack/track.hpp"

namespace courtrack {

/// One annotated (or hypothesised) box: MOT-style row.
struct GroundTruthBox {
    int frame = 0;
    int id = 0;
    BBox bbox;
};

using HypothesisBox = GroundTruthBox;

struct DetectionReport {
    long tp = 0;
    long fp = 0;
    long fn = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;

    static DetectionReport from_counts(long tp, long fp, long fn);
};

struct MotReport {
    double mota = 0.0;
    double motp = 0.0;
    long misses = 0;
    long false_positives = 0;
    long id_switches = 0;
    long gt_count = 0;
    long matches = 0;
};

/// Per-frame boxes of a detector output, keyed by frame index.
using FrameBoxes = std::map<int, std::vector<BBox>>;

/// Greedy per-frame matching by descending IoU (only IoU > 0 pairs), pooled
/// over frames.
DetectionReport eval_detections(const std::vector<GroundTruthBox>& gt, const FrameBoxes& dets);

/// Per-sequence averaging: mean of precision, recall and F1 over the reports;
/// counts are summed.
DetectionReport average_reports(const std::vector<DetectionReport>& per_sequence);
/// Pooled counts with the ratios recomputed.
DetectionReport pool_reports(const std::vector<DetectionReport>& per_sequence);

struct MotOptions {
    double match_iou = 0.5;  ///< correspondences need IoU strictly above this
};

/// CLEAR-MOT. MOTP is the mean IoU of matched pairs. Throws EmptyGroundTruth.
MotReport eval_mot(const std::vector<GroundTruthBox>& gt, const std::vector<HypothesisBox>& hyp,
                   const MotOptions& opts = {});
MotReport eval_mot(const std::vector<GroundTruthBox>& gt, const std::vector<Track>& tracks,
                   const MotOptions& opts = {});

/// Flattens tracks into MOT rows, sorted by (frame, id).
std::vector<HypothesisBox> tracks_to_boxes(const std::vector<Track>& tracks);

}  // namespace courtrack

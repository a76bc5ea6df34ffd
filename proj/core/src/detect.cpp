#include "courtrack/detect.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <future>
#include <numeric>
#include <stdexcept>

#include "courtrack/errors.hpp"

namespace courtrack {

std::string_view to_string(Stage s) {
    switch (s) {
        case Stage::Coarse: return "coarse";
        case Stage::Refined: return "refined";
        case Stage::Sliding: return "sliding";
        case Stage::External: return "external";
    }
    return "external";
}

Stage stage_from_string(std::string_view name) {
    if (name == "coarse") return Stage::Coarse;
    if (name == "refined") return Stage::Refined;
    if (name == "sliding") return Stage::Sliding;
    if (name == "external") return Stage::External;
    throw std::invalid_argument("unknown detection stage '" + std::string(name) + "'");
}

BBox skeleton_bbox(const std::vector<Keypoint>& keypoints) {
    if (keypoints.empty()) {
        throw EmptyKeypoints("skeleton has no keypoints");
    }
    BBox b{keypoints.front().position.x, keypoints.front().position.y,
           keypoints.front().position.x, keypoints.front().position.y};
    for (const auto& k : keypoints) {
        b.x_min = std::min(b.x_min, k.position.x);
        b.y_min = std::min(b.y_min, k.position.y);
        b.x_max = std::max(b.x_max, k.position.x);
        b.y_max = std::max(b.y_max, k.position.y);
    }
    return b;
}

Detection::Detection(std::vector<Keypoint> keypoints, Stage stage)
    : keypoints_(std::move(keypoints)), bbox_(skeleton_bbox(keypoints_)), stage_(stage) {
    std::array<bool, kMaxPartId + 1> seen{};
    for (const auto& k : keypoints_) {
        if (k.part_id < 0 || k.part_id > kMaxPartId) {
            throw std::invalid_argument("keypoint part id out of range");
        }
        if (seen[static_cast<std::size_t>(k.part_id)]) {
            throw std::invalid_argument("duplicate keypoint part id in one detection");
        }
        seen[static_cast<std::size_t>(k.part_id)] = true;
        if (!(k.confidence >= 0.0 && k.confidence <= 1.0)) {
            throw std::invalid_argument("keypoint confidence outside [0, 1]");
        }
        if (!std::isfinite(k.position.x) || !std::isfinite(k.position.y)) {
            throw std::invalid_argument("keypoint position is not finite");
        }
    }
}

double Detection::mean_confidence() const {
    double sum = 0.0;
    for (const auto& k : keypoints_) {
        sum += k.confidence;
    }
    return sum / static_cast<double>(keypoints_.size());
}

ScalePlan ScalePlan::for_frame(FrameDims dims) {
    ScalePlan plan;
    plan.coarse_scale = 2.0 * plan.model_w / static_cast<double>(dims.w);
    return plan;
}

void ScalePlan::validate() const {
    if (model_w <= 0 || model_h <= 0) {
        throw std::invalid_argument("model dimensions must be positive");
    }
    if (!(coarse_scale > 0.0)) {
        throw std::invalid_argument("coarse scale must be positive");
    }
    if (!(overlap > 0.0 && overlap < 1.0)) {
        throw std::invalid_argument("window overlap must lie in (0, 1)");
    }
}

int ScalePlan::stride_x() const {
    return std::max(1, static_cast<int>(std::floor(model_w * (1.0 - overlap) + 1e-9)));
}

int ScalePlan::stride_y() const {
    return std::max(1, static_cast<int>(std::floor(model_h * (1.0 - overlap) + 1e-9)));
}

FrameDims coarse_dims(FrameDims frame, const ScalePlan& plan) {
    return FrameDims::make(static_cast<int>(std::lround(frame.w * plan.coarse_scale)),
                           static_cast<int>(std::lround(frame.h * plan.coarse_scale)));
}

namespace {

void require_model_fit(FrameDims frame, const ScalePlan& plan) {
    plan.validate();
    if (frame.w < plan.model_w || frame.h < plan.model_h) {
        throw std::invalid_argument("frame is smaller than the detector model window");
    }
}

// Queries the detector and maps its output into frame coordinates.
std::vector<Detection> run_query(const DetectorContract& det, const FrameRaster& content,
                                 Point2 origin, double scale, Stage stage) {
    std::vector<Detection> local;
    try {
        local = det(DetectorQuery{content, origin, scale});
    } catch (const DetectorFailure&) {
        throw;
    } catch (const std::exception& e) {
        throw DetectorFailure(std::string("detector raised: ") + e.what());
    }
    const double tol = 1e-6;
    std::vector<Detection> out;
    out.reserve(local.size());
    for (const auto& d : local) {
        const BBox& b = d.bbox();
        if (b.x_min < -tol || b.y_min < -tol || b.x_max > content.width() + tol ||
            b.y_max > content.height() + tol) {
            throw DetectorFailure("detector returned keypoints outside the queried window");
        }
        out.push_back(d.mapped(
            [&](Point2 p) { return Point2{origin.x + p.x / scale, origin.y + p.y / scale}; },
            stage));
    }
    return out;
}

struct Window {
    int x;
    int y;
};

std::vector<Detection> query_windows(const FrameRaster& frame, const std::vector<Window>& windows,
                                     const DetectorContract& det, const ScalePlan& plan,
                                     Stage stage, const DetectOptions& opts) {
    auto one = [&](const Window& w) {
        const FrameRaster crop = frame.crop(w.x, w.y, plan.model_w, plan.model_h);
        return run_query(det, crop, Point2{static_cast<double>(w.x), static_cast<double>(w.y)},
                         1.0, stage);
    };

    std::vector<std::vector<Detection>> per_window(windows.size());
    if (opts.parallel && windows.size() > 1) {
        std::vector<std::future<std::vector<Detection>>> jobs;
        jobs.reserve(windows.size());
        for (const auto& w : windows) {
            jobs.push_back(std::async(std::launch::async, one, w));
        }
        for (std::size_t i = 0; i < jobs.size(); ++i) {
            per_window[i] = jobs[i].get();
        }
    } else {
        for (std::size_t i = 0; i < windows.size(); ++i) {
            per_window[i] = one(windows[i]);
        }
    }

    std::vector<Detection> all;
    for (auto& v : per_window) {
        all.insert(all.end(), std::make_move_iterator(v.begin()), std::make_move_iterator(v.end()));
    }
    return dedup_detections(all, opts.duplicate_iou);
}

}  // namespace

std::vector<Detection> coarse_pass(const FrameRaster& frame, const DetectorContract& det,
                                   const ScalePlan& plan) {
    require_model_fit(frame.dims(), plan);
    const FrameRaster small = frame.resize_nearest(coarse_dims(frame.dims(), plan));
    return run_query(det, small, Point2{0.0, 0.0}, plan.coarse_scale, Stage::Coarse);
}

std::pair<int, int> refine_window_origin(Point2 center, FrameDims frame, const ScalePlan& plan) {
    const long x = std::lround(center.x - plan.model_w / 2.0);
    const long y = std::lround(center.y - plan.model_h / 2.0);
    const long max_x = std::max(0, frame.w - plan.model_w);
    const long max_y = std::max(0, frame.h - plan.model_h);
    return {static_cast<int>(std::clamp(x, 0L, max_x)), static_cast<int>(std::clamp(y, 0L, max_y))};
}

std::vector<Detection> refine_pass(const FrameRaster& frame, const std::vector<Detection>& coarse,
                                   const DetectorContract& det, const ScalePlan& plan,
                                   const DetectOptions& opts) {
    if (coarse.empty()) {
        return {};
    }
    require_model_fit(frame.dims(), plan);
    std::vector<Window> windows;
    windows.reserve(coarse.size());
    for (const auto& c : coarse) {
        const auto [x, y] = refine_window_origin(c.bbox().centroid(), frame.dims(), plan);
        windows.push_back({x, y});
    }
    return query_windows(frame, windows, det, plan, Stage::Refined, opts);
}

std::vector<int> sliding_origins(int frame_extent, int window_extent, int stride) {
    if (window_extent <= 0 || stride <= 0 || frame_extent < window_extent) {
        throw std::invalid_argument("invalid sliding window geometry");
    }
    std::vector<int> out;
    for (int o = 0; o + window_extent <= frame_extent; o += stride) {
        out.push_back(o);
    }
    if (out.back() + window_extent < frame_extent) {
        out.push_back(frame_extent - window_extent);
    }
    return out;
}

std::vector<Detection> sliding_pass(const FrameRaster& frame, const DetectorContract& det,
                                    const ScalePlan& plan, const DetectOptions& opts) {
    require_model_fit(frame.dims(), plan);
    std::vector<Window> windows;
    for (int y : sliding_origins(frame.height(), plan.model_h, plan.stride_y())) {
        for (int x : sliding_origins(frame.width(), plan.model_w, plan.stride_x())) {
            windows.push_back({x, y});
        }
    }
    return query_windows(frame, windows, det, plan, Stage::Sliding, opts);
}

bool better_detection(const Detection& a, const Detection& b) {
    if (a.keypoints().size() != b.keypoints().size()) {
        return a.keypoints().size() > b.keypoints().size();
    }
    return a.mean_confidence() > b.mean_confidence();
}

std::vector<Detection> dedup_detections(const std::vector<Detection>& dets, double duplicate_iou) {
    std::vector<std::size_t> order(dets.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
        return better_detection(dets[l], dets[r]);
    });

    std::vector<std::size_t> kept;
    for (std::size_t i : order) {
        const bool dup = std::any_of(kept.begin(), kept.end(), [&](std::size_t k) {
            return iou(dets[i].bbox(), dets[k].bbox()) >= duplicate_iou;
        });
        if (!dup) {
            kept.push_back(i);
        }
    }
    std::sort(kept.begin(), kept.end());

    std::vector<Detection> out;
    out.reserve(kept.size());
    for (std::size_t i : kept) {
        out.push_back(dets[i]);
    }
    return out;
}

std::vector<Detection> merge_detections(const std::vector<Detection>& primary,
                                        const std::vector<Detection>& extra,
                                        double duplicate_iou) {
    std::vector<Detection> out = primary;
    for (const auto& e : extra) {
        const bool dup = std::any_of(primary.begin(), primary.end(), [&](const Detection& p) {
            return iou(e.bbox(), p.bbox()) >= duplicate_iou;
        });
        if (!dup) {
            out.push_back(e);
        }
    }
    return out;
}

std::vector<Detection> filter_by_court(const std::vector<Detection>& dets,
                                       const CourtRegion& region) {
    std::vector<Detection> out;
    for (const auto& d : dets) {
        if (point_in_court(region, d.bbox().bottom_center())) {
            out.push_back(d);
        }
    }
    return out;
}

MultiScaleResult detect_multiscale(const FrameRaster& frame, const DetectorContract& det,
                                   const ScalePlan& plan, const DetectOptions& opts) {
    MultiScaleResult r;
    r.coarse = dedup_detections(coarse_pass(frame, det, plan), opts.duplicate_iou);
    r.refined = refine_pass(frame, r.coarse, det, plan, opts);
    r.sliding = sliding_pass(frame, det, plan, opts);
    const auto stage1 = merge_detections(r.refined, r.coarse, opts.duplicate_iou);
    r.merged = merge_detections(stage1, r.sliding, opts.duplicate_iou);
    return r;
}

}  // namespace courtrack

#include "courtrack/cost.hpp"

#include <array>
#include <stdexcept>

#include "courtrack/errors.hpp"

namespace courtrack {

CostWeights CostWeights::make(double alpha, double beta) {
    if (!(alpha >= 0.0 && alpha <= 1.0) || !(beta >= 0.0 && beta <= 1.0)) {
        throw std::invalid_argument("cost weights alpha and beta must lie in [0, 1]");
    }
    if (alpha + beta > 1.0 + 1e-12) {
        throw std::invalid_argument("cost weights alpha + beta must not exceed 1");
    }
    return CostWeights(alpha, beta);
}

double cost_distance(const ObservedBox& a, const ObservedBox& b, FrameDims dims) {
    return normalized_centroid_distance(a.homography, b.homography, a.bbox(), b.bbox(), dims);
}

double cost_iou(const ObservedBox& a, const ObservedBox& b) {
    return 1.0 - iou(transform_bbox(a.homography, a.bbox()), transform_bbox(b.homography, b.bbox()));
}

double cost_content(const ObservedBox& a, const ObservedBox& b, PatchWindow win) {
    if (!a.frame || !b.frame) {
        throw std::invalid_argument("content cost needs both frame rasters");
    }
    // keypoints are validated unique per detection; pair by part id
    const auto& ka = a.detection.keypoints();
    const auto& kb = b.detection.keypoints();
    std::array<const Keypoint*, kMaxPartId + 1> by_part{};
    for (const auto& k : kb) {
        by_part[static_cast<std::size_t>(k.part_id)] = &k;
    }
    std::array<const Keypoint*, kMaxPartId + 1> in_a{};
    for (const auto& k : ka) {
        in_a[static_cast<std::size_t>(k.part_id)] = &k;
    }

    double sum = 0.0;
    int shared = 0;
    for (std::size_t part = 0; part <= kMaxPartId; ++part) {
        if (!in_a[part] || !by_part[part]) {
            continue;
        }
        double d = 1.0;
        try {
            d = patch_mean_abs_diff(*a.frame, in_a[part]->position, *b.frame,
                                    by_part[part]->position, win);
        } catch (const EmptyOverlap&) {
            // no comparable pixels for this part
        }
        sum += d;
        ++shared;
    }
    return shared == 0 ? 1.0 : sum / shared;
}

CostTerms cost_terms(const ObservedBox& a, const ObservedBox& b, FrameDims dims, PatchWindow win) {
    return CostTerms{cost_distance(a, b, dims), cost_iou(a, b), cost_content(a, b, win)};
}

double combine(const CostWeights& w, const CostTerms& terms) {
    return w.alpha() * terms.distance + w.beta() * terms.overlap + w.gamma() * terms.content;
}

double similarity_cost(const ObservedBox& a, const ObservedBox& b, const CostWeights& w,
                       FrameDims dims, PatchWindow win) {
    return combine(w, cost_terms(a, b, dims, win));
}

}  // namespace courtrack

#pragma once

#include <memory>

#include "courtrack/detect.hpp"
#include "courtrack/geometry.hpp"
#include "courtrack/imaging.hpp"

namespace courtrack {

/// Weights of the three-term similarity cost; gamma = 1 - (alpha + beta).
class CostWeights {
public:
    /// 0.65 / 0.05 / 0.30
    CostWeights() = default;
    /// Throws std::invalid_argument unless alpha, beta in [0, 1] and alpha + beta <= 1.
    static CostWeights make(double alpha, double beta);

    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    double gamma() const { return 1.0 - (alpha_ + beta_); }

private:
    CostWeights(double a, double b) : alpha_(a), beta_(b) {}
    double alpha_ = 0.65;
    double beta_ = 0.05;
};

/// A detection together with the stabilizing homography and pixels of its frame.
struct ObservedBox {
    Detection detection;
    Homography homography;
    std::shared_ptr<const FrameRaster> frame;
    int t = 0;

    const BBox& bbox() const { return detection.bbox(); }
};

struct CostTerms {
    double distance = 0.0;  ///< normalized stabilized centroid distance
    double overlap = 0.0;   ///< 1 - IoU of stabilized boxes
    double content = 0.0;   ///< keypoint patch dissimilarity
};

double cost_distance(const ObservedBox& a, const ObservedBox& b, FrameDims dims);

/// 1 - IoU of the two stabilized boxes, so that overlap lowers the cost.
double cost_iou(const ObservedBox& a, const ObservedBox& b);

/// Mean patch difference over the part ids detected in both boxes; 1 when no
/// part is shared. Throws std::invalid_argument if either frame is missing.
double cost_content(const ObservedBox& a, const ObservedBox& b, PatchWindow win = {});

CostTerms cost_terms(const ObservedBox& a, const ObservedBox& b, FrameDims dims,
                     PatchWindow win = {});

double combine(const CostWeights& w, const CostTerms& terms);

double similarity_cost(const ObservedBox& a, const ObservedBox& b, const CostWeights& w,
                       FrameDims dims, PatchWindow win = {});

}  // namespace courtrack

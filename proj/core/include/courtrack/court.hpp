#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "courtrack/geometry.hpp"
#include "courtrack/imaging.hpp"

namespace courtrack {

struct LineSegment {
    Point2 p0;
    Point2 p1;

    /// Throws std::invalid_argument for zero-length segments.
    static LineSegment make(Point2 p0, Point2 p1);
    double length() const { return distance(p0, p1); }
};

struct LineVote {
    Line2 line;
    double weight = 0.0;  ///< total supporting segment length, px
};

enum class Orientation { Horizontal, Vertical, Neither };

/// Accumulator resolution for line voting.
struct VoteBinning {
    double theta_deg = 1.0;
    double rho_px = 3.0;
};

/// Hough-style (theta, rho) voting. Each segment adds its full length to the
/// cell of its own supporting line; each returned line is the length-weighted
/// orthogonal least-squares fit of the segments in its cell. Sorted by
/// descending weight. Throws NoSegments on empty input.
std::vector<LineVote> vote_dominant_lines(std::span<const LineSegment> segments, FrameDims dims,
                                          VoteBinning binning = {});

/// Horizontal: crosses both the left and the right image side. Vertical: crosses
/// the top or bottom side and one other side (a line crossing top and bottom
/// only counts as Vertical). Neither otherwise.
Orientation classify_orientation(const Line2& line, FrameDims dims);

/// Colour gate in HSV. Hue interval wraps around when h_lo > h_hi.
struct HsvFilter {
    double h_lo = 0.0, h_hi = 360.0;
    double s_lo = 0.0, s_hi = 1.0;
    double v_lo = 0.0, v_hi = 1.0;

    static HsvFilter make(double h_lo, double h_hi, double s_lo, double s_hi, double v_lo,
                          double v_hi);
    bool matches(const HsvPixel& p) const;
};

/// Court estimate. Each present boundary keeps the court on its inner side:
/// below `top`, above `bottom`, right of `left`, left of `right`.
struct CourtRegion {
    Line2 top;
    Line2 bottom;
    std::optional<Line2> left;
    std::optional<Line2> right;
    FrameDims dims;

    /// Full frame bounded by its own top and bottom edges.
    static CourtRegion full_frame(FrameDims dims);
};

/// Closed-region membership test.
bool point_in_court(const CourtRegion& region, Point2 p);

/// European variant: among candidates whose orientation equals `axis`, pick the
/// one maximising |filter fraction on one side - filter fraction on the other|.
/// Ties keep the earliest candidate. Throws NoCandidates if none has the axis.
Line2 select_boundary_european(std::span<const Line2> candidates, const FrameRaster& frame,
                               const HsvFilter& filter, Orientation axis);

/// Per-pixel filter response, computed once and reusable across candidates.
BinaryMask filter_mask(const FrameRaster& frame, const HsvFilter& filter);

/// As above but on a precomputed response, restricted to pixels where
/// `within` holds (empty function = whole frame).
Line2 select_boundary_european(std::span<const Line2> candidates, const BinaryMask& response,
                               Orientation axis, const PixelRegion& within = {});

struct NbaOptions {
    double step = 2.0;             ///< px per iteration
    double drop_tolerance = 0.005; ///< absolute drop that freezes a line
};

/// Full state of the inward two-line scan.
struct BoundaryScan {
    Line2 low;   ///< line that started at the low end of the scan axis (top / left)
    Line2 high;  ///< line that started at the high end (bottom / right)
    bool low_fixed = false;
    bool high_fixed = false;
    bool met = false;       ///< lines met before both were fixed
    double objective = 0.0; ///< product of the three fractions at the final position
    int iterations = 0;
};

/// Two lines parallel to `orientation` start at the extremes of the frame (or of
/// the pixels selected by `within`) and move toward each other by `step`. Tracked
/// fractions: people above/before the low line, people below/after the high
/// line, non-people between. A line is fixed at its previous position once its
/// own fraction drops by more than the tolerance; a fraction that was zero at
/// the start does not arm the drop rule until it first becomes positive.
BoundaryScan scan_boundaries(const BinaryMask& mask, const Line2& orientation,
                             const NbaOptions& opts = {}, const PixelRegion& within = {});

/// NBA variant for the sidelines. Throws DegenerateCourt if the lines meet
/// before both are fixed.
std::pair<Line2, Line2> converge_boundaries_nba(const BinaryMask& mask,
                                                const Line2& orientation_line,
                                                const NbaOptions& opts = {});

/// Baseline search inside the band between the sidelines, scanning left to
/// right and right to left. Sides that never fix are absent.
std::pair<std::optional<Line2>, std::optional<Line2>> converge_baselines_nba(
    const BinaryMask& mask, const Line2& top, const Line2& bottom, const Line2& orientation_line,
    const NbaOptions& opts = {});

/// Orients a boundary line so its normal points into the court for the given role.
Line2 orient_top(const Line2& l);
Line2 orient_bottom(const Line2& l);
Line2 orient_left(const Line2& l);
Line2 orient_right(const Line2& l);

struct CourtOptions {
    std::size_t candidates = 10;  ///< top-ranked vote lines handed to the selectors
    VoteBinning binning{};
    NbaOptions nba{};
};

/// Voting + European colour-filter selection. The filter is expected to match
/// the court surroundings; the side of each boundary with the lower response is
/// taken as the court. The missing horizontal boundary is the frame edge.
CourtRegion detect_court_european(std::span<const LineSegment> segments, const FrameRaster& frame,
                                  const HsvFilter& filter, const CourtOptions& opts = {});

/// Voting + people-mask convergence. The best-ranked horizontal line gives the
/// sideline orientation, the best-ranked vertical line (if any) the baseline one.
CourtRegion detect_court_nba(std::span<const LineSegment> segments, const BinaryMask& mask,
                             const CourtOptions& opts = {});

}  // namespace courtrack

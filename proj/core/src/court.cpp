#include "courtrack/court.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <tuple>

#include "courtrack/errors.hpp"

namespace courtrack {

LineSegment LineSegment::make(Point2 p0, Point2 p1) {
    if (!(distance(p0, p1) > 0.0)) {
        throw std::invalid_argument("line segment has zero length");
    }
    return {p0, p1};
}

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

LineSegment canonical(const LineSegment& s) {
    if (std::tie(s.p0.x, s.p0.y) <= std::tie(s.p1.x, s.p1.y)) {
        return s;
    }
    return {s.p1, s.p0};
}

bool segment_less(const LineSegment& a, const LineSegment& b) {
    return std::tie(a.p0.x, a.p0.y, a.p1.x, a.p1.y) < std::tie(b.p0.x, b.p0.y, b.p1.x, b.p1.y);
}

// Length-weighted orthogonal fit: each segment is a uniform mass along its extent.
Line2 fit_line(const std::vector<LineSegment>& segs) {
    double total = 0.0;
    Point2 c{};
    for (const auto& s : segs) {
        const double len = s.length();
        const Point2 m = 0.5 * (s.p0 + s.p1);
        total += len;
        c = c + len * m;
    }
    c = (1.0 / total) * c;

    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& s : segs) {
        const double len = s.length();
        const Point2 m = 0.5 * (s.p0 + s.p1) - c;
        const Point2 d = s.p1 - s.p0;
        sxx += len * (m.x * m.x + d.x * d.x / 12.0);
        sxy += len * (m.x * m.y + d.x * d.y / 12.0);
        syy += len * (m.y * m.y + d.y * d.y / 12.0);
    }
    const double phi = 0.5 * std::atan2(2.0 * sxy, sxx - syy);
    const Line2 normal_form = Line2::make(-std::sin(phi), std::cos(phi), 0.0);
    return normal_form.parallel_through(c);
}

struct Crossings {
    bool left = false, right = false, top = false, bottom = false;
};

Crossings crossings(const Line2& l, FrameDims dims) {
    const double w = dims.w;
    const double h = dims.h;
    const double eps = 1e-9 * std::max(w, h);
    constexpr double tiny = 1e-15;
    auto within = [eps](double v, double hi) { return v >= -eps && v <= hi + eps; };
    Crossings out;
    if (std::abs(l.b) > tiny) {
        out.left = within(-l.c / l.b, h);
        out.right = within(-(l.c + l.a * w) / l.b, h);
    }
    if (std::abs(l.a) > tiny) {
        out.top = within(-l.c / l.a, w);
        out.bottom = within(-(l.c + l.b * h) / l.a, w);
    }
    return out;
}

}  // namespace

std::vector<LineVote> vote_dominant_lines(std::span<const LineSegment> segments, FrameDims dims,
                                          VoteBinning binning) {
    (void)dims;
    if (segments.empty()) {
        throw NoSegments("no line segments to vote with");
    }
    if (!(binning.theta_deg > 0.0) || !(binning.rho_px > 0.0)) {
        throw std::invalid_argument("vote binning must be positive");
    }
    const long theta_bins = std::lround(180.0 / binning.theta_deg);

    std::map<std::pair<long, long>, std::vector<LineSegment>> cells;
    for (const auto& raw : segments) {
        if (!(raw.length() > 0.0)) {
            throw std::invalid_argument("line segment has zero length");
        }
        const LineSegment s = canonical(raw);
        const Point2 d = s.p1 - s.p0;
        // normal angle in [0, 180)
        double theta = std::atan2(d.y, d.x) / kDeg + 90.0;
        theta = std::fmod(theta, 180.0);
        if (theta < 0.0) {
            theta += 180.0;
        }
        double rho = s.p0.x * std::cos(theta * kDeg) + s.p0.y * std::sin(theta * kDeg);
        long tb = std::lround(theta / binning.theta_deg);
        if (tb >= theta_bins) {
            tb -= theta_bins;
            rho = -rho;
        }
        const long rb = std::lround(rho / binning.rho_px);
        cells[{tb, rb}].push_back(s);
    }

    struct Ranked {
        std::pair<long, long> key;
        LineVote vote;
    };
    std::vector<Ranked> ranked;
    ranked.reserve(cells.size());
    for (auto& [key, segs] : cells) {
        std::sort(segs.begin(), segs.end(), segment_less);
        double weight = 0.0;
        for (const auto& s : segs) {
            weight += s.length();
        }
        ranked.push_back({key, LineVote{fit_line(segs), weight}});
    }
    std::stable_sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
        if (a.vote.weight != b.vote.weight) {
            return a.vote.weight > b.vote.weight;
        }
        return a.key < b.key;
    });

    std::vector<LineVote> out;
    out.reserve(ranked.size());
    for (auto& r : ranked) {
        out.push_back(r.vote);
    }
    return out;
}

Orientation classify_orientation(const Line2& line, FrameDims dims) {
    const Crossings c = crossings(line, dims);
    if (c.left && c.right) {
        return Orientation::Horizontal;
    }
    if ((c.top || c.bottom) && (c.left || c.right || (c.top && c.bottom))) {
        return Orientation::Vertical;
    }
    return Orientation::Neither;
}

HsvFilter HsvFilter::make(double h_lo, double h_hi, double s_lo, double s_hi, double v_lo,
                          double v_hi) {
    if (s_lo > s_hi || v_lo > v_hi) {
        throw std::invalid_argument("HSV filter bounds are inverted");
    }
    if (h_lo < 0.0 || h_hi > 360.0 || h_hi < 0.0 || h_lo > 360.0 || s_lo < 0.0 || s_hi > 1.0 ||
        v_lo < 0.0 || v_hi > 1.0) {
        throw std::invalid_argument("HSV filter bounds out of range");
    }
    return HsvFilter{h_lo, h_hi, s_lo, s_hi, v_lo, v_hi};
}

bool HsvFilter::matches(const HsvPixel& p) const {
    const bool hue_ok = h_lo <= h_hi ? (p.h >= h_lo && p.h <= h_hi) : (p.h >= h_lo || p.h <= h_hi);
    return hue_ok && p.s >= s_lo && p.s <= s_hi && p.v >= v_lo && p.v <= v_hi;
}

Line2 orient_top(const Line2& l) { return l.b < 0.0 || (l.b == 0.0 && l.a < 0.0) ? l.negated() : l; }
Line2 orient_bottom(const Line2& l) { return orient_top(l).negated(); }
Line2 orient_left(const Line2& l) { return l.a < 0.0 || (l.a == 0.0 && l.b < 0.0) ? l.negated() : l; }
Line2 orient_right(const Line2& l) { return orient_left(l).negated(); }

CourtRegion CourtRegion::full_frame(FrameDims dims) {
    return CourtRegion{Line2::horizontal(0.0), Line2::horizontal(dims.h), std::nullopt,
                       std::nullopt, dims};
}

bool point_in_court(const CourtRegion& region, Point2 p) {
    constexpr double eps = 1e-9;
    if (orient_top(region.top).signed_distance(p) < -eps) {
        return false;
    }
    if (orient_bottom(region.bottom).signed_distance(p) < -eps) {
        return false;
    }
    if (region.left && orient_left(*region.left).signed_distance(p) < -eps) {
        return false;
    }
    if (region.right && orient_right(*region.right).signed_distance(p) < -eps) {
        return false;
    }
    return true;
}

BinaryMask filter_mask(const FrameRaster& frame, const HsvFilter& filter) {
    BinaryMask out(frame.dims());
    for (int y = 0; y < frame.height(); ++y) {
        for (int x = 0; x < frame.width(); ++x) {
            out.set(x, y, filter.matches(rgb_to_hsv(frame.at(x, y))));
        }
    }
    return out;
}

namespace {

struct SideFractions {
    double negative = 0.0;
    double positive = 0.0;
    bool both_nonempty = false;
};

SideFractions side_fractions(const Line2& line, const BinaryMask& response,
                             const PixelRegion& within) {
    constexpr double eps = 1e-9;
    long long neg_n = 0, neg_hit = 0, pos_n = 0, pos_hit = 0;
    const FrameDims d = response.dims();
    for (int y = 0; y < d.h; ++y) {
        for (int x = 0; x < d.w; ++x) {
            const Point2 p{static_cast<double>(x), static_cast<double>(y)};
            if (within && !within(p)) {
                continue;
            }
            const double s = line.signed_distance(p);
            const bool hit = response.at(x, y);
            if (s < -eps) {
                ++neg_n;
                neg_hit += hit;
            } else if (s > eps) {
                ++pos_n;
                pos_hit += hit;
            }
        }
    }
    SideFractions out;
    out.both_nonempty = neg_n > 0 && pos_n > 0;
    out.negative = neg_n > 0 ? static_cast<double>(neg_hit) / static_cast<double>(neg_n) : 0.0;
    out.positive = pos_n > 0 ? static_cast<double>(pos_hit) / static_cast<double>(pos_n) : 0.0;
    return out;
}

}  // namespace

Line2 select_boundary_european(std::span<const Line2> candidates, const BinaryMask& response,
                               Orientation axis, const PixelRegion& within) {
    std::optional<Line2> best;
    double best_score = -1.0;
    for (const auto& cand : candidates) {
        if (classify_orientation(cand, response.dims()) != axis) {
            continue;
        }
        const SideFractions f = side_fractions(cand, response, within);
        const double score = f.both_nonempty ? std::abs(f.negative - f.positive) : 0.0;
        if (score > best_score) {
            best_score = score;
            best = cand;
        }
    }
    if (!best) {
        throw NoCandidates("no candidate line with the requested orientation");
    }
    return *best;
}

Line2 select_boundary_european(std::span<const Line2> candidates, const FrameRaster& frame,
                               const HsvFilter& filter, Orientation axis) {
    bool any = std::any_of(candidates.begin(), candidates.end(), [&](const Line2& l) {
        return classify_orientation(l, frame.dims()) == axis;
    });
    if (!any) {
        throw NoCandidates("no candidate line with the requested orientation");
    }
    return select_boundary_european(candidates, filter_mask(frame, filter), axis);
}

namespace {

// Pixels projected on the scan axis, sorted, with prefix sums of people counts.
class AxisProfile {
public:
    AxisProfile(const BinaryMask& mask, const Line2& axis, const PixelRegion& within) {
        const FrameDims d = mask.dims();
        for (int y = 0; y < d.h; ++y) {
            for (int x = 0; x < d.w; ++x) {
                const Point2 p{static_cast<double>(x), static_cast<double>(y)};
                if (within && !within(p)) {
                    continue;
                }
                samples_.push_back({axis.a * p.x + axis.b * p.y, mask.at(x, y)});
            }
        }
        std::sort(samples_.begin(), samples_.end(),
                  [](const Sample& l, const Sample& r) { return l.s < r.s; });
        prefix_.assign(samples_.size() + 1, 0);
        for (std::size_t i = 0; i < samples_.size(); ++i) {
            prefix_[i + 1] = prefix_[i] + (samples_[i].people ? 1 : 0);
        }
    }

    bool empty() const { return samples_.empty(); }
    double min() const { return samples_.front().s; }
    double max() const { return samples_.back().s; }

    /// People fraction among samples with s < v.
    double people_below(double v) const {
        const std::size_t n = lower(v);
        return n ? static_cast<double>(prefix_[n]) / static_cast<double>(n) : 0.0;
    }
    /// People fraction among samples with s > v.
    double people_above(double v) const {
        const std::size_t first = upper(v);
        const std::size_t n = samples_.size() - first;
        return n ? static_cast<double>(prefix_.back() - prefix_[first]) / static_cast<double>(n)
                 : 0.0;
    }
    /// Non-people fraction among samples with lo <= s <= hi.
    double empty_between(double lo, double hi) const {
        const std::size_t a = lower(lo);
        const std::size_t b = upper(hi);
        if (b <= a) {
            return 0.0;
        }
        const auto n = static_cast<double>(b - a);
        return (n - static_cast<double>(prefix_[b] - prefix_[a])) / n;
    }

private:
    struct Sample {
        double s;
        bool people;
    };
    std::size_t lower(double v) const {
        return static_cast<std::size_t>(
            std::lower_bound(samples_.begin(), samples_.end(), v,
                             [](const Sample& a, double val) { return a.s < val; }) -
            samples_.begin());
    }
    std::size_t upper(double v) const {
        return static_cast<std::size_t>(
            std::upper_bound(samples_.begin(), samples_.end(), v,
                             [](double val, const Sample& a) { return val < a.s; }) -
            samples_.begin());
    }

    std::vector<Sample> samples_;
    std::vector<long long> prefix_;
};

}  // namespace

BoundaryScan scan_boundaries(const BinaryMask& mask, const Line2& orientation,
                             const NbaOptions& opts, const PixelRegion& within) {
    if (!(opts.step >= 1.0)) {
        throw std::invalid_argument("scan step must be at least one pixel");
    }
    const AxisProfile profile(mask, orientation, within);
    if (profile.empty()) {
        throw EmptyRegion("boundary scan region selects no pixel");
    }

    double low = profile.min();
    double high = profile.max();
    double prev_low = profile.people_below(low);
    double prev_high = profile.people_above(high);
    bool low_armed = prev_low > 0.0;
    bool high_armed = prev_high > 0.0;

    BoundaryScan out;
    while (!(out.low_fixed && out.high_fixed)) {
        const double next_low = out.low_fixed ? low : low + opts.step;
        const double next_high = out.high_fixed ? high : high - opts.step;
        if (next_low >= next_high) {
            out.met = true;
            break;
        }
        if (!out.low_fixed) {
            const double f = profile.people_below(next_low);
            if (low_armed && prev_low - f > opts.drop_tolerance) {
                out.low_fixed = true;
            } else {
                low = next_low;
                prev_low = f;
                low_armed = low_armed || f > 0.0;
            }
        }
        if (!out.high_fixed) {
            const double f = profile.people_above(next_high);
            if (high_armed && prev_high - f > opts.drop_tolerance) {
                out.high_fixed = true;
            } else {
                high = next_high;
                prev_high = f;
                high_armed = high_armed || f > 0.0;
            }
        }
        ++out.iterations;
    }

    out.low = Line2{orientation.a, orientation.b, -low};
    out.high = Line2{orientation.a, orientation.b, -high};
    out.objective = profile.people_below(low) * profile.people_above(high) *
                    profile.empty_between(low, high);
    return out;
}

std::pair<Line2, Line2> converge_boundaries_nba(const BinaryMask& mask,
                                                const Line2& orientation_line,
                                                const NbaOptions& opts) {
    const Line2 axis = orient_top(Line2::make(orientation_line.a, orientation_line.b, 0.0));
    const BoundaryScan scan = scan_boundaries(mask, axis, opts);
    if (scan.met) {
        throw DegenerateCourt("sideline candidates met before both were fixed");
    }
    return {scan.low, scan.high};
}

std::pair<std::optional<Line2>, std::optional<Line2>> converge_baselines_nba(
    const BinaryMask& mask, const Line2& top, const Line2& bottom, const Line2& orientation_line,
    const NbaOptions& opts) {
    const Line2 axis = orient_left(Line2::make(orientation_line.a, orientation_line.b, 0.0));
    const Line2 inner_top = orient_top(top);
    const Line2 inner_bottom = orient_bottom(bottom);
    const PixelRegion band = [&](Point2 p) {
        return inner_top.signed_distance(p) >= 0.0 && inner_bottom.signed_distance(p) >= 0.0;
    };
    const BoundaryScan scan = scan_boundaries(mask, axis, opts, band);
    std::optional<Line2> left;
    std::optional<Line2> right;
    if (scan.low_fixed) {
        left = scan.low;
    }
    if (scan.high_fixed) {
        right = scan.high;
    }
    return {left, right};
}

}  // namespace courtrack

namespace courtrack {

namespace {

std::vector<Line2> top_candidates(std::span<const LineSegment> segments, FrameDims dims,
                                  const CourtOptions& opts) {
    const auto votes = vote_dominant_lines(segments, dims, opts.binning);
    std::vector<Line2> out;
    for (std::size_t i = 0; i < votes.size() && i < opts.candidates; ++i) {
        out.push_back(votes[i].line);
    }
    return out;
}

std::optional<Line2> first_with(const std::vector<Line2>& lines, Orientation o, FrameDims dims) {
    for (const auto& l : lines) {
        if (classify_orientation(l, dims) == o) {
            return l;
        }
    }
    return std::nullopt;
}

}  // namespace

CourtRegion detect_court_european(std::span<const LineSegment> segments, const FrameRaster& frame,
                                  const HsvFilter& filter, const CourtOptions& opts) {
    const FrameDims dims = frame.dims();
    const auto cands = top_candidates(segments, dims, opts);
    const BinaryMask response = filter_mask(frame, filter);

    CourtRegion region = CourtRegion::full_frame(dims);
    const Line2 side = orient_top(select_boundary_european(cands, response, Orientation::Horizontal));
    const SideFractions hf = side_fractions(side, response, {});
    // positive side of an orient_top line is below it
    if (hf.positive <= hf.negative) {
        region.top = side;
    } else {
        region.bottom = orient_bottom(side);
    }

    const Line2 inner_top = orient_top(region.top);
    const Line2 inner_bottom = orient_bottom(region.bottom);
    const PixelRegion band = [&](Point2 p) {
        return inner_top.signed_distance(p) >= 0.0 && inner_bottom.signed_distance(p) >= 0.0;
    };
    if (first_with(cands, Orientation::Vertical, dims)) {
        const Line2 base =
            orient_left(select_boundary_european(cands, response, Orientation::Vertical, band));
        const SideFractions vf = side_fractions(base, response, band);
        if (vf.positive <= vf.negative) {
            region.left = base;
        } else {
            region.right = orient_right(base);
        }
    }
    return region;
}

CourtRegion detect_court_nba(std::span<const LineSegment> segments, const BinaryMask& mask,
                             const CourtOptions& opts) {
    const FrameDims dims = mask.dims();
    const auto cands = top_candidates(segments, dims, opts);
    const auto horizontal = first_with(cands, Orientation::Horizontal, dims);
    if (!horizontal) {
        throw NoCandidates("no horizontal dominant line among the candidates");
    }
    CourtRegion region = CourtRegion::full_frame(dims);
    auto [top, bottom] = converge_boundaries_nba(mask, *horizontal, opts.nba);
    region.top = orient_top(top);
    region.bottom = orient_bottom(bottom);
    if (const auto vertical = first_with(cands, Orientation::Vertical, dims)) {
        auto [left, right] = converge_baselines_nba(mask, region.top, region.bottom, *vertical, opts.nba);
        if (left) {
            region.left = orient_left(*left);
        }
        if (right) {
            region.right = orient_right(*right);
        }
    }
    return region;
}

}  // namespace courtrack

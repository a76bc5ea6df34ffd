#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "courtrack/court.hpp"
#include "courtrack/errors.hpp"

using namespace courtrack;

namespace {

constexpr double kPi = std::numbers::pi;

double line_angle_deg(const Line2& l) {
    // direction angle of the line, folded into [0, 180)
    double a = std::atan2(l.a, -l.b) * 180.0 / kPi;
    a = std::fmod(a + 360.0, 180.0);
    return a;
}

double angle_gap_deg(double a, double b) {
    const double d = std::fmod(std::abs(a - b), 180.0);
    return std::min(d, 180.0 - d);
}

// Planted line plus clutter. Returns the segments and the planted line.
std::pair<std::vector<LineSegment>, Line2> planted_scene(std::uint64_t seed, FrameDims d) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(0.0, d.w), uy(0.0, d.h), ang(0.0, kPi),
        len(5.0, 30.0);
    std::vector<LineSegment> segs;
    for (int i = 0; i < 50; ++i) {
        const Point2 p{ux(rng), uy(rng)};
        const double a = ang(rng), l = len(rng);
        segs.push_back(LineSegment::make(p, p + Point2{l * std::cos(a), l * std::sin(a)}));
    }
    const double a = std::uniform_real_distribution<double>(-0.3, 0.3)(rng);
    const Point2 origin{0.1 * d.w, std::uniform_real_distribution<double>(0.2 * d.h, 0.8 * d.h)(rng)};
    const Point2 dir{std::cos(a), std::sin(a)};
    // 5 supports of 80 px with gaps between them
    for (int k = 0; k < 5; ++k) {
        const Point2 s = origin + (k * 120.0) * dir;
        segs.push_back(LineSegment::make(s, s + 80.0 * dir));
    }
    return {segs, Line2::through(origin, origin + dir)};
}

BinaryMask banded_mask(FrameDims d, int top_end, int bottom_start) {
    // dense bands: every row exactly 80% people; sparse middle: 1 in 20
    BinaryMask m(d);
    for (int y = 0; y < d.h; ++y) {
        for (int x = 0; x < d.w; ++x) {
            const bool dense = y <= top_end || y >= bottom_start;
            m.set(x, y, dense ? (x % 5 != 0) : ((x + 7 * y) % 20 == 0));
        }
    }
    return m;
}

double horizontal_row(const Line2& l) { return -l.c / l.b; }

}  // namespace

TEST(VoteDominantLines, CollinearSegmentsAccumulate) {
    const std::vector<LineSegment> segs{
        LineSegment::make({10, 100}, {20, 100}),
        LineSegment::make({40, 100}, {60, 100}),
        LineSegment::make({100, 100}, {130, 100}),
    };
    const auto votes = vote_dominant_lines(segs, {640, 480});
    ASSERT_EQ(votes.size(), 1u);
    EXPECT_DOUBLE_EQ(votes[0].weight, 60.0);
    EXPECT_NEAR(votes[0].line.signed_distance({0, 100}), 0.0, 1e-9);
    EXPECT_NEAR(votes[0].line.signed_distance({500, 100}), 0.0, 1e-9);
}

TEST(VoteDominantLines, HeavierLineRanksFirst) {
    const std::vector<LineSegment> segs{
        LineSegment::make({0, 50}, {40, 50}),
        LineSegment::make({0, 200}, {100, 200}),
    };
    const auto votes = vote_dominant_lines(segs, {640, 480});
    ASSERT_EQ(votes.size(), 2u);
    EXPECT_DOUBLE_EQ(votes[0].weight, 100.0);
    EXPECT_NEAR(votes[0].line.signed_distance({7, 200}), 0.0, 1e-9);
}

TEST(VoteDominantLines, PlantedLineRecovered) {
    const FrameDims d{960, 540};
    for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
        const auto [segs, planted] = planted_scene(seed, d);
        const auto votes = vote_dominant_lines(segs, d);
        const Line2 got = votes.front().line;
        EXPECT_NEAR(votes.front().weight, 400.0, 1e-9) << "seed " << seed;
        EXPECT_LE(angle_gap_deg(line_angle_deg(got), line_angle_deg(planted)), 0.5) << "seed " << seed;
        // offset measured at the foot of the frame centre on the planted line
        const Point2 c{d.w / 2.0, d.h / 2.0};
        const Point2 foot = c - planted.signed_distance(c) * Point2{planted.a, planted.b};
        EXPECT_LE(std::abs(got.signed_distance(foot)), 2.0) << "seed " << seed;
    }
}

TEST(VoteDominantLines, TotalWeightIsTotalLength) {
    const auto [segs, planted] = planted_scene(9, {960, 540});
    double total = 0.0;
    for (const auto& s : segs) total += s.length();
    double voted = 0.0;
    for (const auto& v : vote_dominant_lines(segs, {960, 540})) voted += v.weight;
    EXPECT_NEAR(voted, total, 1e-9);
}

TEST(VoteDominantLines, RankingIgnoresInputOrder) {
    auto [segs, planted] = planted_scene(10, {960, 540});
    const auto a = vote_dominant_lines(segs, {960, 540});
    std::mt19937_64 rng(10);
    for (int trial = 0; trial < 5; ++trial) {
        std::shuffle(segs.begin(), segs.end(), rng);
        for (auto& s : segs) {
            if (rng() & 1) std::swap(s.p0, s.p1);
        }
        const auto b = vote_dominant_lines(segs, {960, 540});
        ASSERT_EQ(a.size(), b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            EXPECT_EQ(a[i].weight, b[i].weight);
            EXPECT_EQ(a[i].line.a, b[i].line.a);
            EXPECT_EQ(a[i].line.b, b[i].line.b);
            EXPECT_EQ(a[i].line.c, b[i].line.c);
        }
    }
}

TEST(VoteDominantLines, EmptyInputThrows) {
    EXPECT_THROW(vote_dominant_lines({}, {10, 10}), NoSegments);
}

TEST(ClassifyOrientation, Fixtures) {
    const FrameDims d{900, 600};
    EXPECT_EQ(classify_orientation(Line2::horizontal(300), d), Orientation::Horizontal);
    EXPECT_EQ(classify_orientation(Line2::through({0, 150}, {300, 0}), d), Orientation::Vertical);
    EXPECT_EQ(classify_orientation(Line2::vertical(450), d), Orientation::Vertical);
    EXPECT_EQ(classify_orientation(Line2::horizontal(-50), d), Orientation::Neither);
}

TEST(ClassifyOrientation, InvariantUnderNegation) {
    const FrameDims d{900, 600};
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> ang(0.0, kPi), off(-200.0, 1000.0);
    for (int i = 0; i < 500; ++i) {
        const double a = ang(rng);
        const Line2 l = Line2::make(std::cos(a), std::sin(a), -off(rng));
        EXPECT_EQ(classify_orientation(l, d), classify_orientation(l.negated(), d));
    }
}

TEST(SelectBoundaryEuropean, PlantedTransition) {
    const FrameDims d{50, 100};
    FrameRaster f(d, Rgb{90, 90, 90});
    f.fill_box(BBox::make(0, 0, 50, 30), Rgb{20, 40, 220});
    const HsvFilter blue = HsvFilter::make(200, 260, 0.5, 1.0, 0.3, 1.0);
    const std::vector<Line2> cands{Line2::horizontal(10), Line2::horizontal(30), Line2::horizontal(60)};
    const Line2 got = select_boundary_european(cands, f, blue, Orientation::Horizontal);
    EXPECT_EQ(got.c, cands[1].c);
}

TEST(SelectBoundaryEuropean, UniformFrameKeepsFirst) {
    const FrameDims d{50, 100};
    const FrameRaster f(d, Rgb{20, 40, 220});
    const HsvFilter any{};
    const std::vector<Line2> cands{Line2::horizontal(70), Line2::horizontal(30), Line2::vertical(20)};
    EXPECT_EQ(select_boundary_european(cands, f, any, Orientation::Horizontal).c, cands[0].c);
    const std::vector<Line2> one{Line2::horizontal(42)};
    EXPECT_EQ(select_boundary_european(one, f, any, Orientation::Horizontal).c, one[0].c);
    EXPECT_THROW(select_boundary_european(one, f, any, Orientation::Vertical), NoCandidates);
}

TEST(SelectBoundaryEuropean, TwoRegionFramesWithContrast) {
    std::mt19937_64 rng(21);
    const FrameDims d{80, 120};
    std::uniform_int_distribution<int> row(20, 100);
    std::uniform_real_distribution<double> frac(0.0, 1.0);
    int checked = 0;
    while (checked < 20) {
        const int split = row(rng);
        const double fa = frac(rng), fb = frac(rng);
        if (std::abs(fa - fb) < 0.2) continue;
        BinaryMask m(d);
        std::bernoulli_distribution ca(fa), cb(fb);
        for (int y = 0; y < d.h; ++y) {
            for (int x = 0; x < d.w; ++x) m.set(x, y, y < split ? ca(rng) : cb(rng));
        }
        std::vector<Line2> cands;
        // pixels on a line count for neither side, so rows next to the split
        // would separate the regions just as cleanly
        for (int y = 10; y < 115; y += 7) {
            if (std::abs(y - (split - 0.5)) > 1.5) cands.push_back(Line2::horizontal(y));
        }
        cands.push_back(Line2::horizontal(split - 0.5));
        std::shuffle(cands.begin(), cands.end(), rng);
        const Line2 got = select_boundary_european(cands, m, Orientation::Horizontal);
        EXPECT_DOUBLE_EQ(horizontal_row(got), split - 0.5) << "split " << split;
        ++checked;
    }
}

TEST(ConvergeBoundariesNba, PlantedBands) {
    const FrameDims d{64, 1080};
    for (double step : {2.0, 3.0, 4.0}) {
        const auto mask = banded_mask(d, 200, 900);
        NbaOptions opts;
        opts.step = step;
        const auto [top, bottom] = converge_boundaries_nba(mask, Line2::horizontal(500), opts);
        EXPECT_LE(std::abs(horizontal_row(top) - 200.0), 2 * step) << "step " << step;
        EXPECT_LE(std::abs(horizontal_row(bottom) - 900.0), 2 * step) << "step " << step;
    }
}

TEST(ConvergeBoundariesNba, UnitStepNeedsShallowBands) {
    // Past a dense band of depth D the fraction above the line falls by about
    // 0.75 * step / D per iteration, which must exceed the 0.005 tolerance.
    const FrameDims d{64, 1080};
    NbaOptions opts;
    opts.step = 1.0;
    const auto [top, bottom] = converge_boundaries_nba(banded_mask(d, 99, 980), Line2::horizontal(500), opts);
    EXPECT_LE(std::abs(horizontal_row(top) - 99.0), 2.0);
    EXPECT_LE(std::abs(horizontal_row(bottom) - 980.0), 2.0);
    EXPECT_THROW(converge_boundaries_nba(banded_mask(d, 200, 900), Line2::horizontal(500), opts), DegenerateCourt);
}

TEST(ConvergeBoundariesNba, EmptyMaskIsDegenerate) {
    const BinaryMask mask({32, 200}, false);
    EXPECT_THROW(converge_boundaries_nba(mask, Line2::horizontal(10)), DegenerateCourt);
}

TEST(ConvergeBoundariesNba, SingleBandFixesTopOnly) {
    const FrameDims d{32, 400};
    BinaryMask mask(d);
    for (int y = 0; y < 100; ++y) {
        for (int x = 0; x < d.w; ++x) mask.set(x, y, true);
    }
    const auto scan = scan_boundaries(mask, Line2::horizontal(0));
    EXPECT_TRUE(scan.low_fixed);
    EXPECT_FALSE(scan.high_fixed);
    EXPECT_TRUE(scan.met);
    EXPECT_LE(std::abs(horizontal_row(scan.low) - 100.0), 4.0);
    EXPECT_THROW(converge_boundaries_nba(mask, Line2::horizontal(0)), DegenerateCourt);
}

TEST(ConvergeBaselinesNba, PlantedColumns) {
    const FrameDims d{400, 300};
    BinaryMask mask(d);
    for (int y = 0; y < d.h; ++y) {
        for (int x = 0; x < d.w; ++x) {
            const bool stands = y < 50 || y >= 250 || x < 60 || x >= 340;
            mask.set(x, y, stands ? (x + y) % 4 != 0 : (x * 3 + y) % 25 == 0);
        }
    }
    const auto [top, bottom] = converge_boundaries_nba(mask, Line2::horizontal(1));
    EXPECT_LE(std::abs(horizontal_row(top) - 50.0), 4.0);
    EXPECT_LE(std::abs(horizontal_row(bottom) - 250.0), 4.0);
    const auto [left, right] = converge_baselines_nba(mask, top, bottom, Line2::vertical(1));
    ASSERT_TRUE(left.has_value());
    ASSERT_TRUE(right.has_value());
    EXPECT_LE(std::abs(-left->c / left->a - 60.0), 4.0);
    EXPECT_LE(std::abs(-right->c / right->a - 340.0), 4.0);
}

TEST(PointInCourt, Fixtures) {
    const FrameDims d{100, 80};
    const auto full = CourtRegion::full_frame(d);
    EXPECT_TRUE(point_in_court(full, {50, 40}));

    CourtRegion r = full;
    r.top = Line2::horizontal(20);
    EXPECT_FALSE(point_in_court(r, {50, 10}));
    EXPECT_TRUE(point_in_court(r, {50, 20}));
    EXPECT_TRUE(point_in_court(r, {50, 80}));
    r.left = Line2::vertical(10);
    EXPECT_FALSE(point_in_court(r, {5, 50}));
    EXPECT_TRUE(point_in_court(r, {10, 50}));
    // orientation of the stored coefficients does not matter
    r.top = Line2::horizontal(20).negated();
    EXPECT_FALSE(point_in_court(r, {50, 10}));
}

TEST(DetectCourtNba, SegmentsAndMask) {
    const FrameDims d{160, 600};
    const auto mask = banded_mask(d, 120, 480);
    const std::vector<LineSegment> segs{
        LineSegment::make({0, 121}, {150, 121}),
        LineSegment::make({5, 479}, {100, 479}),
        LineSegment::make({30, 10}, {31, 40}),
    };
    const CourtRegion r = detect_court_nba(segs, mask);
    EXPECT_LE(std::abs(horizontal_row(r.top) - 120.0), 4.0);
    EXPECT_LE(std::abs(horizontal_row(r.bottom) - 480.0), 4.0);
    EXPECT_TRUE(point_in_court(r, {80, 300}));
    EXPECT_FALSE(point_in_court(r, {80, 50}));
}

TEST(DetectCourtNba, NoHorizontalCandidate) {
    const BinaryMask mask({100, 100}, false);
    const std::vector<LineSegment> segs{LineSegment::make({50, 0}, {50, 100})};
    EXPECT_THROW(detect_court_nba(segs, mask), NoCandidates);
}

TEST(DetectCourtEuropean, StandsAboveCourt) {
    const FrameDims d{200, 150};
    FrameRaster f(d, Rgb{160, 120, 70});
    f.fill_box(BBox::make(0, 0, 200, 45), Rgb{30, 60, 200});
    const HsvFilter stands = HsvFilter::make(200, 260, 0.4, 1.0, 0.2, 1.0);
    const std::vector<LineSegment> segs{
        LineSegment::make({0, 45}, {80, 45}),
        LineSegment::make({100, 45}, {190, 45}),
        LineSegment::make({0, 100}, {120, 100}),
        LineSegment::make({10, 20}, {60, 20}),
    };
    const CourtRegion r = detect_court_european(segs, f, stands);
    EXPECT_NEAR(horizontal_row(r.top), 45.0, 1e-9);
    EXPECT_NEAR(horizontal_row(r.bottom), 150.0, 1e-9);
    EXPECT_FALSE(r.left.has_value());
    EXPECT_TRUE(point_in_court(r, {100, 120}));
    EXPECT_FALSE(point_in_court(r, {100, 10}));
}

TEST(HsvFilterTest, HueWraps) {
    const HsvFilter red = HsvFilter::make(340, 20, 0.5, 1.0, 0.2, 1.0);
    EXPECT_TRUE(red.matches(rgb_to_hsv({250, 10, 10})));
    EXPECT_TRUE(red.matches(rgb_to_hsv({250, 10, 60})));
    EXPECT_FALSE(red.matches(rgb_to_hsv({10, 250, 10})));
    EXPECT_THROW(HsvFilter::make(0, 10, 0.9, 0.1, 0, 1), std::invalid_argument);
}

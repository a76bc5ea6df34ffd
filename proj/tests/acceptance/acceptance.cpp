// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails. Usage: acceptance [work-dir]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "courtrack/assignment.hpp"
#include "courtrack/cost.hpp"
#include "courtrack/court.hpp"
#include "courtrack/detect.hpp"
#include "courtrack/eval.hpp"
#include "courtrack/geometry.hpp"
#include "courtrack/synth.hpp"
#include "courtrack/track.hpp"
#include "oracles.hpp"

using namespace courtrack;
namespace fs = std::filesystem;

namespace {

struct Verdict {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok && pass) {
            pass = false;
            detail = what;
        }
    }
};

struct Criterion {
    int number;
    const char* name;
    double time_limit_s;  // 0 means no limit
    std::function<Verdict()> check;
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// 1
Verdict assignment_optimality() {
    Verdict v;
    std::mt19937_64 rng(101);
    std::uniform_int_distribution<std::size_t> dim(1, 7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int n = 250;
    for (int i = 0; i < n; ++i) {
        const std::size_t r = dim(rng), c = dim(rng);
        CostMatrix m(r, c);
        for (std::size_t a = 0; a < r; ++a) {
            for (std::size_t b = 0; b < c; ++b) m(a, b) = u(rng);
        }
        const double got = assignment_cost(m, solve_assignment(m));
        const double want = brute_force_assignment(m).second;
        v.require(got == want, "matrix " + std::to_string(i) + ": " + fmt(got) + " vs " + fmt(want));
    }
    if (v.pass) v.detail = std::to_string(n) + " matrices up to 7x7, exact";
    return v;
}

// 2
Verdict geometry_oracles() {
    Verdict v;
    std::mt19937_64 rng(102);
    std::uniform_int_distribution<int> pos(0, 40), ext(1, 20);
    for (int i = 0; i < 200; ++i) {
        const int ax = pos(rng), ay = pos(rng), bx = pos(rng), by = pos(rng);
        const oracle::IntBox a{ax, ay, ax + ext(rng), ay + ext(rng)};
        const oracle::IntBox b{bx, by, bx + ext(rng), by + ext(rng)};
        const auto [inter, uni] = oracle::pixel_iou_counts(a, b);
        const double got = iou(BBox::make(a.x0, a.y0, a.x1, a.y1), BBox::make(b.x0, b.y0, b.x1, b.y1));
        v.require(got == static_cast<double>(inter) / static_cast<double>(uni), "iou pair " + std::to_string(i));
    }
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    int projected = 0;
    double worst = 0.0;
    while (projected < 200) {
        Homography::Matrix m{};
        for (auto& x : m) x = u(rng);
        m[8] = 3.0;
        const double x = 100 * u(rng), y = 100 * u(rng);
        if (std::abs(m[6] * x + m[7] * y + m[8]) < 1e-3 || std::abs(Homography(m).determinant()) < 1e-6) {
            continue;
        }
        const auto o = oracle::project(m, x, y);
        const Point2 p = apply_homography(Homography(m), {x, y});
        const double scale = std::max({1.0, std::abs(o[0]), std::abs(o[1])});
        worst = std::max(worst, std::max(std::abs(p.x - o[0]), std::abs(p.y - o[1])) / scale);
        ++projected;
    }
    v.require(worst <= 1e-9, "homography deviation " + fmt(worst));
    if (v.pass) v.detail = "200 iou pairs exact, 200 projections within " + fmt(worst);
    return v;
}

// 3
Verdict cost_bounds() {
    Verdict v;
    const FrameDims dims{640, 480};
    std::mt19937_64 rng(103);
    auto noise = [&](std::uint64_t seed) {
        std::mt19937_64 r(seed);
        std::vector<Rgb> px(static_cast<std::size_t>(dims.pixel_count()));
        for (auto& p : px) p = {static_cast<std::uint8_t>(r()), static_cast<std::uint8_t>(r()), static_cast<std::uint8_t>(r())};
        return std::make_shared<const FrameRaster>(dims, std::move(px));
    };
    const auto f1 = noise(1), f2 = noise(2);
    std::uniform_real_distribution<double> ux(0, 590), uy(0, 400), sz(5, 40), pan(-20, 20);
    const double diag = std::hypot(640.0, 480.0);
    double worst = 0.0;
    const int n = 600;
    for (int i = 0; i < n; ++i) {
        const double x1 = ux(rng), y1 = uy(rng), x2 = ux(rng), y2 = uy(rng);
        const Homography h1 = Homography::translation(pan(rng), pan(rng));
        const Homography h2 = Homography::translation(pan(rng), pan(rng));
        const Detection da({{0, {x1, y1}, 0.9}, {1, {x1 + sz(rng), y1 + sz(rng)}, 0.9}});
        const Detection db({{1, {x2, y2}, 0.9}, {2, {x2 + sz(rng), y2 + sz(rng)}, 0.9}});
        const ObservedBox a{da, h1, f1, 1}, b{db, h2, f2, 0};
        const double c = similarity_cost(a, b, CostWeights{}, dims);
        v.require(c >= 0.0 && c <= 1.0, "cost out of [0,1]: " + fmt(c));
        v.require(std::abs(similarity_cost(a, a, CostWeights{}, dims)) <= 1e-12, "self cost non-zero");

        const auto ca = apply_homography(h1, da.bbox().centroid());
        const auto cb = apply_homography(h2, db.bbox().centroid());
        const double dist = std::hypot(ca.x - cb.x, ca.y - cb.y) / diag;
        const auto ta = transform_bbox(h1, da.bbox()), tb = transform_bbox(h2, db.bbox());
        const double iw = std::max(0.0, std::min(ta.x_max, tb.x_max) - std::max(ta.x_min, tb.x_min));
        const double ih = std::max(0.0, std::min(ta.y_max, tb.y_max) - std::max(ta.y_min, tb.y_min));
        const double inter = iw * ih;
        const double overlap = 1.0 - inter / (ta.area() + tb.area() - inter);
        const double content = patch_mean_abs_diff(*f1, da.keypoints()[1].position, *f2, db.keypoints()[0].position);
        worst = std::max(worst, std::abs(c - (0.65 * dist + 0.05 * overlap + 0.3 * content)));
    }
    v.require(worst <= 1e-12, "term-wise deviation " + fmt(worst));
    if (v.pass) v.detail = std::to_string(n) + " pairs, term-wise deviation " + fmt(worst);
    return v;
}

// 4
Verdict clean_scenario() {
    Verdict v;
    ScenarioSpec spec;
    spec.seed = 104;
    const auto seq = generate(spec);
    const auto rep = eval_mot(seq.gt, run_tracker(seq.to_sequence(), MatchConfig{}));
    v.require(rep.mota == 1.0, "MOTA " + fmt(rep.mota));
    v.require(rep.motp >= 0.999, "MOTP " + fmt(rep.motp));
    v.require(rep.id_switches == 0, "id switches " + std::to_string(rep.id_switches));
    v.detail = "MOTA " + fmt(rep.mota) + ", MOTP " + fmt(rep.motp) + ", id switches " +
               std::to_string(rep.id_switches) + (v.pass ? "" : "; " + v.detail);
    return v;
}

// 5
Verdict memory_ablation() {
    Verdict v;
    std::ostringstream summary;
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        ScenarioSpec spec;
        spec.seed = seed;
        const auto clean = generate(spec);
        const auto seq = degrade(clean, 0.1, seed);
        const double removed = 1.0 - static_cast<double>(seq.detection_count()) /
                                         static_cast<double>(clean.detection_count());
        v.require(removed >= 0.05 && removed <= 0.15, "seed " + std::to_string(seed) + " removed " + fmt(removed));
        MatchConfig one, two;
        one.memory_depth = 1;
        two.memory_depth = 2;
        const auto frames = seq.to_sequence();
        const auto r1 = eval_mot(seq.gt, run_tracker(frames, one));
        const auto r2 = eval_mot(seq.gt, run_tracker(frames, two));
        v.require(r2.mota > r1.mota, "seed " + std::to_string(seed) + " MOTA not improved");
        v.require(r2.id_switches < r1.id_switches, "seed " + std::to_string(seed) + " id switches not reduced");
        summary << (seed > 1 ? "; " : "") << "s" << seed << " " << fmt(r1.mota) << "->" << fmt(r2.mota)
                << " (ids " << r1.id_switches << "->" << r2.id_switches << ")";
    }
    v.detail = summary.str() + (v.pass ? "" : "; " + v.detail);
    return v;
}

// 6
Verdict stabilization() {
    Verdict v;
    const FrameDims dims{960, 540};
    const double pan = 3.0;
    const double diag = std::hypot(960.0, 540.0);
    std::vector<ObservedBox> stab, raw;
    for (int t = 0; t < 30; ++t) {
        const double x = 300 + pan * t;
        const Detection d = stencil_detection(BBox::make(x, 200, x + 40, 280));
        stab.push_back({d, Homography::translation(-pan * t, 0), nullptr, t});
        raw.push_back({d, Homography{}, nullptr, t});
    }
    double worst_stab = 0.0, worst_slope = 0.0;
    for (std::size_t i = 0; i < stab.size(); ++i) {
        for (std::size_t j = 0; j < stab.size(); ++j) {
            worst_stab = std::max(worst_stab, cost_distance(stab[i], stab[j], dims));
            const double gap = std::abs(static_cast<double>(i) - static_cast<double>(j));
            worst_slope = std::max(worst_slope, std::abs(cost_distance(raw[i], raw[j], dims) - gap * pan / diag));
        }
    }
    v.require(worst_stab <= 1e-9, "stabilized distance " + fmt(worst_stab));
    v.require(worst_slope <= 1e-6, "linear growth deviation " + fmt(worst_slope));
    if (v.pass) v.detail = "max stabilized " + fmt(worst_stab) + ", slope deviation " + fmt(worst_slope);
    return v;
}

// 7
Verdict clear_mot_traces() {
    Verdict v;
    auto box = [](int f, int id, double x, double y) { return GroundTruthBox{f, id, BBox::make(x, y, x + 10, y + 10)}; };

    std::vector<GroundTruthBox> gt1, hyp1;
    for (int t = 0; t < 10; ++t) {
        gt1.push_back(box(t, 1, t, 0));
        hyp1.push_back(box(t, t < 5 ? 7 : 8, t, 0));
    }
    const auto r1 = eval_mot(gt1, hyp1);
    v.require(r1.mota == 1.0 - 1.0 / 10.0 && r1.id_switches == 1, "switch trace MOTA " + fmt(r1.mota));

    std::vector<GroundTruthBox> gt2, hyp2;
    for (int t = 0; t < 3; ++t) {
        for (int k = 1; k <= 2; ++k) {
            gt2.push_back(box(t, k, 30.0 * k, 0));
            if (!(t == 1 && k == 2)) hyp2.push_back(box(t, k, 30.0 * k, 0));
        }
    }
    hyp2.push_back(box(2, 9, 300, 300));
    const auto r2 = eval_mot(gt2, hyp2);
    v.require(r2.mota == 1.0 - 2.0 / 6.0, "miss/spurious trace MOTA " + fmt(r2.mota));

    FrameBoxes dets;
    dets[0] = {BBox::make(0, 0, 10, 6), BBox::make(0, 0, 10, 3)};
    const auto d = eval_detections({box(0, 1, 0, 0)}, dets);
    v.require(d.tp == 1 && d.fp == 1 && d.fn == 0, "detection fixture");
    if (v.pass) v.detail = "MOTA " + fmt(r1.mota) + " and " + fmt(r2.mota) + "; tp=1 fp=1 fn=0";
    return v;
}

// 8
Verdict court_recovery() {
    Verdict v;
    std::mt19937_64 rng(108);
    int nba = 0, euro = 0, voted = 0;

    for (int trial = 0; trial < 3; ++trial) {
        const double step = NbaOptions{}.step;
        std::uniform_int_distribution<int> top_row(80, 250), bottom_row(830, 1000);
        const int top_end = top_row(rng), bottom_start = bottom_row(rng);
        const FrameDims d{64, 1080};
        BinaryMask m(d);
        for (int y = 0; y < d.h; ++y) {
            for (int x = 0; x < d.w; ++x) {
                const bool dense = y <= top_end || y >= bottom_start;
                m.set(x, y, dense ? (x % 5 != 0) : ((x + 7 * y) % 20 == 0));
            }
        }
        NbaOptions opts;
        opts.step = step;
        const auto [top, bottom] = converge_boundaries_nba(m, Line2::horizontal((top_end + bottom_start) / 2.0), opts);
        const double et = std::abs(-top.c / top.b - top_end), eb = std::abs(-bottom.c / bottom.b - bottom_start);
        v.require(et <= 2 * step && eb <= 2 * step, "nba rows " + std::to_string(top_end) + "/" + std::to_string(bottom_start) + " errors " + fmt(et) + ", " + fmt(eb));
        ++nba;
    }

    const HsvFilter blue = HsvFilter::make(200, 260, 0.5, 1.0, 0.3, 1.0);
    for (int trial = 0; trial < 3; ++trial) {
        const FrameDims d{120, 200};
        const int split = std::uniform_int_distribution<int>(30, 170)(rng);
        FrameRaster f(d, Rgb{150, 110, 60});
        f.fill_box(BBox::make(0, 0, d.w, split), Rgb{20, 40, 220});
        std::vector<Line2> cands{Line2::horizontal(split)};
        for (int y = 12; y < 195; y += 23) {
            if (std::abs(y - split) > 3) cands.push_back(Line2::horizontal(y));
        }
        std::shuffle(cands.begin(), cands.end(), rng);
        const Line2 got = select_boundary_european(cands, f, blue, Orientation::Horizontal);
        v.require(std::abs(-got.c / got.b - split) < 1e-9, "european split " + std::to_string(split));
        ++euro;
    }

    const FrameDims d{960, 540};
    const double pi = std::acos(-1.0);
    for (int trial = 0; trial < 3; ++trial) {
        std::uniform_real_distribution<double> ux(0, d.w), uy(0, d.h), ang(0, pi), len(5, 30);
        std::vector<LineSegment> segs;
        for (int i = 0; i < 50; ++i) {
            const Point2 p{ux(rng), uy(rng)};
            const double a = ang(rng), l = len(rng);
            segs.push_back(LineSegment::make(p, p + Point2{l * std::cos(a), l * std::sin(a)}));
        }
        const double a = std::uniform_real_distribution<double>(-0.3, 0.3)(rng);
        const Point2 origin{96, std::uniform_real_distribution<double>(108, 432)(rng)};
        const Point2 dir{std::cos(a), std::sin(a)};
        for (int k = 0; k < 5; ++k) {
            const Point2 s = origin + (k * 120.0) * dir;
            segs.push_back(LineSegment::make(s, s + 80.0 * dir));
        }
        const Line2 planted = Line2::through(origin, origin + dir);
        const Line2 got = vote_dominant_lines(segs, d).front().line;
        const double dot = std::min(1.0, std::abs(got.a * planted.a + got.b * planted.b));
        const double angle = std::acos(dot) * 180.0 / pi;
        const Point2 c{d.w / 2.0, d.h / 2.0};
        const Point2 foot = c - planted.signed_distance(c) * Point2{planted.a, planted.b};
        const double off = std::abs(got.signed_distance(foot));
        v.require(angle <= 0.5 && off <= 2.0, "voting angle " + fmt(angle) + " offset " + fmt(off));
        ++voted;
    }
    if (v.pass) {
        v.detail = std::to_string(nba) + " nba (step " + fmt(NbaOptions{}.step) + " px), " + std::to_string(euro) + " european, " + std::to_string(voted) +
                   " voting constructions";
    }
    return v;
}

// 9
Verdict sliding_coverage() {
    Verdict v;
    const ScalePlan plan;
    for (auto [w, h] : {std::pair{432, 368}, std::pair{864, 368}, std::pair{1920, 1080}}) {
        const auto xs = sliding_origins(w, plan.model_w, plan.stride_x());
        const auto ys = sliding_origins(h, plan.model_h, plan.stride_y());
        const std::string tag = std::to_string(w) + "x" + std::to_string(h);
        v.require(xs == oracle::window_origins(w, plan.model_w, plan.stride_x()), tag + " x origins");
        v.require(ys == oracle::window_origins(h, plan.model_h, plan.stride_y()), tag + " y origins");
        // a pixel is covered iff both of its coordinates are covered
        const auto cx = oracle::coverage(w, plan.model_w, xs);
        const auto cy = oracle::coverage(h, plan.model_h, ys);
        long uncovered = 0;
        for (int c : cx) uncovered += c == 0;
        for (int c : cy) uncovered += c == 0;
        v.require(uncovered == 0, tag + " has uncovered coordinates");
    }
    if (v.pass) v.detail = "432x368, 864x368, 1920x1080 fully covered, origins match";
    return v;
}

// 10
std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Verdict end_to_end_determinism(const fs::path& work) {
    Verdict v;
    fs::remove_all(work);
    auto pipeline = [&](const fs::path& dir) {
        std::ostringstream out, err;
        auto call = [&](std::vector<std::string> args) {
            args.insert(args.begin(), "courtrack");
            const int code = cli::run(args, out, err);
            v.require(code == 0, args[1] + " exited " + std::to_string(code) + ": " + err.str());
        };
        const fs::path scn = dir / "scenario";
        call({"synth", "--seed", "110", "--jitter", "0.5", "--extra-dropout", "0.1", "--out", scn.string()});
        call({"track", "--frames", (scn / "frames").string(), "--detections", (scn / "detections.jsonl").string(),
              "--homographies", (scn / "homographies.json").string(), "--out", (dir / "tracks.csv").string()});
        call({"eval", "--gt", (scn / "gt.csv").string(), "--hyp", (dir / "tracks.csv").string(), "--out",
              (dir / "report.json").string()});
    };
    pipeline(work / "run1");
    pipeline(work / "run2");
    std::size_t compared = 0;
    for (const auto& entry : fs::recursive_directory_iterator(work / "run1")) {
        if (!entry.is_regular_file()) continue;
        const auto rel = fs::relative(entry.path(), work / "run1");
        v.require(fs::exists(work / "run2" / rel) && slurp(entry.path()) == slurp(work / "run2" / rel),
                  rel.string() + " differs");
        ++compared;
    }
    v.require(compared > 40, "only " + std::to_string(compared) + " files written");
    if (v.pass) v.detail = std::to_string(compared) + " files byte-identical";
    return v;
}

}  // namespace

int main(int argc, char** argv) {
    const fs::path work = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "courtrack_acceptance";

    const std::vector<Criterion> criteria{
        {1, "assignment optimality", 5.0, assignment_optimality},
        {2, "geometry oracles", 2.0, geometry_oracles},
        {3, "cost bounds and identity", 0.0, cost_bounds},
        {4, "clean scenario", 10.0, clean_scenario},
        {5, "memory ablation ordering", 0.0, memory_ablation},
        {6, "stabilization equivariance", 0.0, stabilization},
        {7, "CLEAR-MOT hand traces", 0.0, clear_mot_traces},
        {8, "court recovery", 5.0, court_recovery},
        {9, "sliding-window coverage", 0.0, sliding_coverage},
        {10, "end-to-end determinism", 0.0, [&] { return end_to_end_determinism(work); }},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.check();
        } catch (const std::exception& e) {
            v.pass = false;
            v.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.time_limit_s > 0.0 && secs >= c.time_limit_s && v.pass) {
            v.pass = false;
            v.detail = "over time limit of " + fmt(c.time_limit_s) + " s";
        }
        failed += !v.pass;
        std::printf("%s [%2d] %-28s %s (%.2f s)\n", v.pass ? "PASS" : "FAIL", c.number, c.name, v.detail.c_str(), secs);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}

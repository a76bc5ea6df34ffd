#include "courtrack/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

#include "courtrack/errors.hpp"

namespace courtrack {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

namespace {

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t purpose, std::uint64_t frame,
                          std::uint64_t target) {
    std::uint64_t s = seed;
    std::uint64_t h = splitmix64(s);
    for (std::uint64_t part : {purpose, frame, target}) {
        std::uint64_t t = h ^ part;
        h = splitmix64(t);
    }
    return h;
}

enum Purpose : std::uint64_t {
    kVelocity = 1,
    kColor = 2,
    kDropout = 3,
    kJitter = 4,
    kDegrade = 5,
};

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t purpose, std::uint64_t frame,
                           std::uint64_t target)
    : engine_(stream_seed(seed, purpose, frame, target)) {}

std::uint64_t RandomStream::next_u64() { return engine_(); }

double RandomStream::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double RandomStream::normal() {
    double u1 = uniform();
    while (u1 <= 0.0) {
        u1 = uniform();
    }
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

void ScenarioSpec::validate() const {
    if (n_targets < 1) {
        throw std::invalid_argument("scenario needs at least one target");
    }
    if (n_frames < 2) {
        throw std::invalid_argument("scenario needs at least two frames");
    }
    FrameDims::make(dims.w, dims.h);
    if (!velocities.empty() && static_cast<int>(velocities.size()) != n_targets) {
        throw std::invalid_argument("velocity list must have one entry per target");
    }
    if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) {
        throw std::invalid_argument("dropout rate must lie in [0, 1)");
    }
    if (!(jitter_sigma >= 0.0) || !(max_speed >= 0.0)) {
        throw std::invalid_argument("jitter and speed must be non-negative");
    }
    if (!(box_w > 0.0) || !(box_h > 0.0)) {
        throw std::invalid_argument("target box must have positive size");
    }
}

Detection stencil_detection(const BBox& box, Stage stage) {
    std::vector<Keypoint> kps;
    kps.reserve(std::size(kStencil));
    for (const auto& s : kStencil) {
        kps.push_back(Keypoint{s.part_id,
                               {std::lerp(box.x_min, box.x_max, s.u), std::lerp(box.y_min, box.y_max, s.v)},
                               0.9});
    }
    return Detection(std::move(kps), stage);
}

std::vector<SequenceFrame> SyntheticSequence::to_sequence() const {
    std::vector<SequenceFrame> out;
    out.reserve(detections.size());
    for (std::size_t f = 0; f < detections.size(); ++f) {
        SequenceFrame sf;
        sf.index = static_cast<int>(f);
        for (const auto& ld : detections[f]) {
            sf.detections.push_back(ld.detection);
        }
        sf.homography = homographies[f];
        sf.frame = frames[f];
        out.push_back(std::move(sf));
    }
    return out;
}

std::size_t SyntheticSequence::detection_count() const {
    std::size_t n = 0;
    for (const auto& f : detections) {
        n += f.size();
    }
    return n;
}

namespace {

int chebyshev(Rgb a, Rgb b) {
    return std::max({std::abs(a.r - b.r), std::abs(a.g - b.g), std::abs(a.b - b.b)});
}

std::vector<Rgb> draw_colors(const ScenarioSpec& spec) {
    constexpr int kMinDistance = 60;
    std::vector<Rgb> colors;
    for (int k = 0; k < spec.n_targets; ++k) {
        RandomStream rng(spec.seed, kColor, 0, static_cast<std::uint64_t>(k));
        bool placed = false;
        for (int attempt = 0; attempt < 100000 && !placed; ++attempt) {
            const Rgb c{static_cast<std::uint8_t>(rng.next_u64() & 0xff),
                        static_cast<std::uint8_t>(rng.next_u64() & 0xff),
                        static_cast<std::uint8_t>(rng.next_u64() & 0xff)};
            bool ok = chebyshev(c, spec.background) >= kMinDistance;
            for (const auto& other : colors) {
                ok = ok && chebyshev(c, other) >= kMinDistance;
            }
            if (ok) {
                colors.push_back(c);
                placed = true;
            }
        }
        if (!placed) {
            throw std::invalid_argument("cannot draw enough distinct target colours");
        }
    }
    return colors;
}

}  // namespace

SyntheticSequence generate(const ScenarioSpec& spec) {
    spec.validate();
    const int n = spec.n_targets;
    const int frames = spec.n_frames;
    const double span = frames - 1;

    std::vector<Point2> vel = spec.velocities;
    if (vel.empty()) {
        for (int k = 0; k < n; ++k) {
            RandomStream rng(spec.seed, kVelocity, 0, static_cast<std::uint64_t>(k));
            const double vx = rng.uniform(-spec.max_speed, spec.max_speed);
            const double vy = rng.uniform(-spec.max_speed, spec.max_speed);
            vel.push_back({vx, vy});
        }
    }
    double margin = spec.max_speed * span;
    for (const auto& v : vel) {
        margin = std::max(margin, std::max(std::abs(v.x), std::abs(v.y)) * span);
    }

    // Grid layout of start positions (box top-left, world frame) inside the
    // region every trajectory stays in-frame for.
    const double x0 = margin + std::max(0.0, -spec.pan.x * span);
    const double x1 = spec.dims.w - spec.box_w - margin - std::max(0.0, spec.pan.x * span);
    const double y0 = margin + std::max(0.0, -spec.pan.y * span);
    const double y1 = spec.dims.h - spec.box_h - margin - std::max(0.0, spec.pan.y * span);
    if (x1 < x0 || y1 < y0) {
        throw TargetOutOfFrame("frame too small for the requested motion and pan");
    }
    const double rw = std::max(x1 - x0, 1.0);
    const double rh = std::max(y1 - y0, 1.0);
    const int cols = std::max(1, static_cast<int>(std::ceil(std::sqrt(n * rw / rh))));
    const int rows = (n + cols - 1) / cols;

    std::vector<Point2> start(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const int c = k % cols;
        const int r = k / cols;
        start[static_cast<std::size_t>(k)] = {x0 + (x1 - x0) * (c + 0.5) / cols,
                                              y0 + (y1 - y0) * (r + 0.5) / rows};
    }

    SyntheticSequence seq;
    seq.spec = spec;
    seq.colors = draw_colors(spec);
    seq.detections.resize(static_cast<std::size_t>(frames));

    for (int t = 0; t < frames; ++t) {
        const Point2 shift{spec.pan.x * t, spec.pan.y * t};
        seq.homographies.push_back(Homography::translation(-shift.x, -shift.y));

        auto raster = std::make_shared<FrameRaster>(spec.dims, spec.background);
        for (int k = 0; k < n; ++k) {
            const auto ks = static_cast<std::size_t>(k);
            const Point2 world = start[ks] + static_cast<double>(t) * vel[ks];
            const Point2 tl = world + shift;
            if (tl.x < 0.0 || tl.y < 0.0 || tl.x + spec.box_w > spec.dims.w ||
                tl.y + spec.box_h > spec.dims.h) {
                throw TargetOutOfFrame("target " + std::to_string(k + 1) + " leaves the frame at t=" +
                                       std::to_string(t));
            }
            const BBox box = BBox::make(tl.x, tl.y, tl.x + spec.box_w, tl.y + spec.box_h);
            seq.gt.push_back({t, k + 1, box});
            raster->fill_box(box, seq.colors[ks]);

            RandomStream drop(spec.seed, kDropout, static_cast<std::uint64_t>(t), ks);
            if (spec.dropout_rate > 0.0 && drop.uniform() < spec.dropout_rate) {
                continue;
            }
            BBox det_box = box;
            if (spec.jitter_sigma > 0.0) {
                RandomStream jit(spec.seed, kJitter, static_cast<std::uint64_t>(t), ks);
                const double ax = box.x_min + spec.jitter_sigma * jit.normal();
                const double ay = box.y_min + spec.jitter_sigma * jit.normal();
                const double bx = box.x_max + spec.jitter_sigma * jit.normal();
                const double by = box.y_max + spec.jitter_sigma * jit.normal();
                det_box = BBox::make(std::min(ax, bx), std::min(ay, by), std::max(ax, bx),
                                     std::max(ay, by));
            }
            seq.detections[static_cast<std::size_t>(t)].push_back({k + 1, stencil_detection(det_box)});
        }
        seq.frames.push_back(std::move(raster));
    }
    return seq;
}

std::pair<Assignment, double> brute_force_assignment(const CostMatrix& m) {
    m.validate();
    const std::size_t rows = m.rows();
    const std::size_t cols = m.cols();
    if (std::max(rows, cols) > 9) {
        throw TooLarge("brute-force assignment is limited to 9x9");
    }
    if (rows == 0 || cols == 0) {
        return {{}, 0.0};
    }
    const bool transpose = rows > cols;
    const std::size_t small = transpose ? cols : rows;
    const std::size_t large = transpose ? rows : cols;

    // every ordered choice of `small` distinct indices out of `large`, in lex order
    std::vector<std::size_t> perm(large);
    std::iota(perm.begin(), perm.end(), 0);
    Assignment best;
    double best_cost = 0.0;
    bool have = false;
    do {
        Assignment pairs;
        for (std::size_t i = 0; i < small; ++i) {
            pairs.emplace_back(transpose ? perm[i] : i, transpose ? i : perm[i]);
        }
        std::sort(pairs.begin(), pairs.end());
        const double cost = assignment_cost(m, pairs);
        if (!have || cost < best_cost) {
            best = pairs;
            best_cost = cost;
            have = true;
        }
        // skip permutations that only reorder the unused tail
        std::reverse(perm.begin() + static_cast<std::ptrdiff_t>(small), perm.end());
    } while (std::next_permutation(perm.begin(), perm.end()));
    return {best, best_cost};
}

SyntheticSequence degrade(const SyntheticSequence& seq, double extra_dropout, std::uint64_t seed) {
    if (!(extra_dropout >= 0.0 && extra_dropout < 1.0)) {
        throw std::invalid_argument("extra dropout must lie in [0, 1)");
    }
    SyntheticSequence out = seq;
    if (extra_dropout == 0.0) {
        return out;
    }
    // a removal blocks its successor, so the per-frame rate is raised to keep
    // the long-run removal fraction near extra_dropout
    const double q = std::min(1.0, extra_dropout / (1.0 - extra_dropout));
    const auto frames = static_cast<int>(seq.detections.size());
    const int n = seq.spec.n_targets;

    std::vector<std::vector<bool>> present(static_cast<std::size_t>(n + 1),
                                           std::vector<bool>(static_cast<std::size_t>(frames), false));
    for (int t = 0; t < frames; ++t) {
        for (const auto& ld : seq.detections[static_cast<std::size_t>(t)]) {
            present[static_cast<std::size_t>(ld.target_id)][static_cast<std::size_t>(t)] = true;
        }
    }
    for (int k = 1; k <= n; ++k) {
        auto& p = present[static_cast<std::size_t>(k)];
        for (int t = 1; t + 1 < frames; ++t) {
            const auto ts = static_cast<std::size_t>(t);
            if (!p[ts] || !p[ts - 1] || !p[ts + 1]) {
                continue;
            }
            RandomStream rng(seed, kDegrade, ts, static_cast<std::uint64_t>(k));
            if (rng.uniform() < q) {
                p[ts] = false;
            }
        }
    }
    for (int t = 0; t < frames; ++t) {
        auto& dets = out.detections[static_cast<std::size_t>(t)];
        std::erase_if(dets, [&](const LabeledDetection& ld) {
            return !present[static_cast<std::size_t>(ld.target_id)][static_cast<std::size_t>(t)];
        });
    }
    return out;
}

}  // namespace courtrack

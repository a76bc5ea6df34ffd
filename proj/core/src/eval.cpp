#include "courtrack/eval.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "courtrack/assignment.hpp"
#include "courtrack/errors.hpp"

namespace courtrack {

DetectionReport DetectionReport::from_counts(long tp, long fp, long fn) {
    DetectionReport r;
    r.tp = tp;
    r.fp = fp;
    r.fn = fn;
    r.precision = tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
    r.recall = tp + fn > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
    r.f1 = r.precision + r.recall > 0.0
               ? 2.0 * r.precision * r.recall / (r.precision + r.recall)
               : 0.0;
    return r;
}

DetectionReport eval_detections(const std::vector<GroundTruthBox>& gt, const FrameBoxes& dets) {
    std::map<int, std::vector<BBox>> gt_by_frame;
    for (const auto& g : gt) {
        gt_by_frame[g.frame].push_back(g.bbox);
    }
    std::set<int> frames;
    for (const auto& [f, _] : gt_by_frame) frames.insert(f);
    for (const auto& [f, _] : dets) frames.insert(f);

    long tp = 0, fp = 0, fn = 0;
    static const std::vector<BBox> none;
    for (int f : frames) {
        const auto git = gt_by_frame.find(f);
        const auto dit = dets.find(f);
        const auto& gs = git == gt_by_frame.end() ? none : git->second;
        const auto& ds = dit == dets.end() ? none : dit->second;

        struct Pair {
            double iou;
            std::size_t g;
            std::size_t d;
        };
        std::vector<Pair> pairs;
        for (std::size_t i = 0; i < gs.size(); ++i) {
            for (std::size_t j = 0; j < ds.size(); ++j) {
                const double v = iou(gs[i], ds[j]);
                if (v > 0.0) {
                    pairs.push_back({v, i, j});
                }
            }
        }
        std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
            return std::tie(b.iou, a.g, a.d) < std::tie(a.iou, b.g, b.d);
        });
        std::vector<bool> g_used(gs.size(), false), d_used(ds.size(), false);
        long matched = 0;
        for (const auto& p : pairs) {
            if (g_used[p.g] || d_used[p.d]) {
                continue;
            }
            g_used[p.g] = d_used[p.d] = true;
            ++matched;
        }
        tp += matched;
        fp += static_cast<long>(ds.size()) - matched;
        fn += static_cast<long>(gs.size()) - matched;
    }
    return DetectionReport::from_counts(tp, fp, fn);
}

DetectionReport average_reports(const std::vector<DetectionReport>& per_sequence) {
    DetectionReport out;
    if (per_sequence.empty()) {
        return out;
    }
    for (const auto& r : per_sequence) {
        out.tp += r.tp;
        out.fp += r.fp;
        out.fn += r.fn;
        out.precision += r.precision;
        out.recall += r.recall;
        out.f1 += r.f1;
    }
    const auto n = static_cast<double>(per_sequence.size());
    out.precision /= n;
    out.recall /= n;
    out.f1 /= n;
    return out;
}

DetectionReport pool_reports(const std::vector<DetectionReport>& per_sequence) {
    long tp = 0, fp = 0, fn = 0;
    for (const auto& r : per_sequence) {
        tp += r.tp;
        fp += r.fp;
        fn += r.fn;
    }
    return DetectionReport::from_counts(tp, fp, fn);
}

MotReport eval_mot(const std::vector<GroundTruthBox>& gt, const std::vector<HypothesisBox>& hyp,
                   const MotOptions& opts) {
    if (gt.empty()) {
        throw EmptyGroundTruth("no ground-truth boxes to evaluate against");
    }
    std::map<int, std::vector<const GroundTruthBox*>> gt_by_frame;
    std::map<int, std::vector<const HypothesisBox*>> hyp_by_frame;
    for (const auto& g : gt) gt_by_frame[g.frame].push_back(&g);
    for (const auto& h : hyp) hyp_by_frame[h.frame].push_back(&h);
    std::set<int> frames;
    for (const auto& [f, _] : gt_by_frame) frames.insert(f);
    for (const auto& [f, _] : hyp_by_frame) frames.insert(f);

    MotReport out;
    out.gt_count = static_cast<long>(gt.size());
    std::map<int, int> mapping;  // gt id -> last hypothesis id
    double iou_sum = 0.0;
    static const std::vector<const GroundTruthBox*> none;

    for (int f : frames) {
        const auto git = gt_by_frame.find(f);
        const auto hit = hyp_by_frame.find(f);
        const auto& gs = git == gt_by_frame.end() ? none : git->second;
        const auto& hs = hit == hyp_by_frame.end() ? none : hit->second;

        std::vector<bool> g_used(gs.size(), false), h_used(hs.size(), false);
        auto record = [&](std::size_t gi, std::size_t hi, double v) {
            g_used[gi] = h_used[hi] = true;
            iou_sum += v;
            ++out.matches;
        };

        // keep still-valid correspondences from earlier frames
        for (std::size_t gi = 0; gi < gs.size(); ++gi) {
            const auto m = mapping.find(gs[gi]->id);
            if (m == mapping.end()) {
                continue;
            }
            for (std::size_t hi = 0; hi < hs.size(); ++hi) {
                if (h_used[hi] || hs[hi]->id != m->second) {
                    continue;
                }
                const double v = iou(gs[gi]->bbox, hs[hi]->bbox);
                if (v > opts.match_iou) {
                    record(gi, hi, v);
                }
                break;
            }
        }

        // optimal assignment among the rest
        std::vector<std::size_t> grest, hrest;
        for (std::size_t i = 0; i < gs.size(); ++i) if (!g_used[i]) grest.push_back(i);
        for (std::size_t j = 0; j < hs.size(); ++j) if (!h_used[j]) hrest.push_back(j);
        if (!grest.empty() && !hrest.empty()) {
            constexpr double pad = 10.0;
            CostMatrix m(grest.size(), hrest.size(), pad, pad);
            for (std::size_t r = 0; r < grest.size(); ++r) {
                for (std::size_t c = 0; c < hrest.size(); ++c) {
                    const double v = iou(gs[grest[r]]->bbox, hs[hrest[c]]->bbox);
                    if (v > opts.match_iou) {
                        m(r, c) = 1.0 - v;
                    }
                }
            }
            for (const auto& [r, c] : solve_assignment(m)) {
                const std::size_t gi = grest[r];
                const std::size_t hi = hrest[c];
                const double v = iou(gs[gi]->bbox, hs[hi]->bbox);
                if (!(v > opts.match_iou)) {
                    continue;
                }
                const auto prev = mapping.find(gs[gi]->id);
                if (prev != mapping.end() && prev->second != hs[hi]->id) {
                    ++out.id_switches;
                }
                mapping[gs[gi]->id] = hs[hi]->id;
                record(gi, hi, v);
            }
        }

        out.misses += std::count(g_used.begin(), g_used.end(), false);
        out.false_positives += std::count(h_used.begin(), h_used.end(), false);
    }

    out.mota = 1.0 - static_cast<double>(out.misses + out.false_positives + out.id_switches) /
                         static_cast<double>(out.gt_count);
    out.motp = out.matches > 0 ? iou_sum / static_cast<double>(out.matches) : 0.0;
    return out;
}

std::vector<HypothesisBox> tracks_to_boxes(const std::vector<Track>& tracks) {
    std::vector<HypothesisBox> out;
    for (const auto& t : tracks) {
        for (const auto& [frame, obs] : t.history) {
            out.push_back({frame, t.id, obs.bbox()});
        }
    }
    std::sort(out.begin(), out.end(), [](const HypothesisBox& a, const HypothesisBox& b) {
        return std::tie(a.frame, a.id) < std::tie(b.frame, b.id);
    });
    return out;
}

MotReport eval_mot(const std::vector<GroundTruthBox>& gt, const std::vector<Track>& tracks,
                   const MotOptions& opts) {
    return eval_mot(gt, tracks_to_boxes(tracks), opts);
}

}  // namespace courtrack

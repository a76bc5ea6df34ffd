#include "courtrack/track.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "courtrack/errors.hpp"

namespace courtrack {

void MatchConfig::validate() const {
    if (!(gate > 0.0)) {
        throw std::invalid_argument("match gate must be positive");
    }
    if (memory_depth != 1 && memory_depth != 2) {
        throw std::invalid_argument("memory depth must be 1 or 2");
    }
    PatchWindow::make(patch.half_extent);
}

std::optional<double> track_cost(const Track& track, const ObservedBox& det, int t,
                                 const MatchConfig& cfg, FrameDims dims) {
    std::optional<double> best;
    for (int back = 1; back <= cfg.memory_depth; ++back) {
        const auto it = track.history.find(t - back);
        if (it == track.history.end()) {
            continue;
        }
        const double c = similarity_cost(det, it->second, cfg.weights, dims, cfg.patch);
        if (!best || c < *best) {
            best = c;
        }
    }
    return best;
}

MatchResult match_frame(const std::vector<Track>& active, const std::vector<ObservedBox>& dets,
                        int t, const MatchConfig& cfg, FrameDims dims, int next_id) {
    cfg.validate();
    const double pad = cfg.pad_value();

    CostMatrix m(dets.size(), active.size(), pad, pad);
    std::vector<std::vector<std::optional<double>>> raw(dets.size(),
                                                        std::vector<std::optional<double>>(active.size()));
    for (std::size_t r = 0; r < dets.size(); ++r) {
        for (std::size_t c = 0; c < active.size(); ++c) {
            raw[r][c] = track_cost(active[c], dets[r], t, cfg, dims);
            if (raw[r][c] && *raw[r][c] <= cfg.gate) {
                m(r, c) = *raw[r][c];
            }
        }
    }

    MatchResult out;
    out.assignments.assign(dets.size(), std::nullopt);
    std::vector<bool> track_matched(active.size(), false);
    for (const auto& [r, c] : solve_assignment(m)) {
        if (raw[r][c] && *raw[r][c] <= cfg.gate) {
            out.assignments[r] = active[c].id;
            track_matched[c] = true;
        }
    }

    for (std::size_t r = 0; r < dets.size(); ++r) {
        if (out.assignments[r]) {
            continue;
        }
        Track fresh;
        fresh.id = next_id++;
        fresh.history.emplace(t, dets[r]);
        out.new_tracks.push_back(std::move(fresh));
    }

    for (std::size_t c = 0; c < active.size(); ++c) {
        if (!track_matched[c] && active[c].last_seen() < t + 1 - cfg.memory_depth) {
            out.retired.push_back(active[c].id);
        }
    }
    return out;
}

Tracker::Tracker(MatchConfig cfg, FrameDims dims) : cfg_(std::move(cfg)), dims_(dims) {
    cfg_.validate();
}

const MatchResult& Tracker::step(int t, std::vector<ObservedBox> dets) {
    if (t != next_t_) {
        throw InconsistentFrameIndexing("expected frame " + std::to_string(next_t_) + ", got " +
                                        std::to_string(t));
    }
    for (const auto& d : dets) {
        if (d.t != t) {
            throw InconsistentFrameIndexing("detection stamped with frame " + std::to_string(d.t) +
                                            " fed at frame " + std::to_string(t));
        }
    }
    last_ = match_frame(active_, dets, t, cfg_, dims_, next_id_);

    for (std::size_t r = 0; r < dets.size(); ++r) {
        if (!last_.assignments[r]) {
            continue;
        }
        const int id = *last_.assignments[r];
        auto it = std::find_if(active_.begin(), active_.end(),
                               [id](const Track& tr) { return tr.id == id; });
        it->history.emplace(t, dets[r]);
    }
    for (const int id : last_.retired) {
        auto it = std::find_if(active_.begin(), active_.end(),
                               [id](const Track& tr) { return tr.id == id; });
        retired_.push_back(std::move(*it));
        active_.erase(it);
    }
    for (const auto& fresh : last_.new_tracks) {
        active_.push_back(fresh);
        next_id_ = std::max(next_id_, fresh.id + 1);
    }
    ++next_t_;
    return last_;
}

std::vector<Track> Tracker::finish() const {
    std::vector<Track> all = retired_;
    all.insert(all.end(), active_.begin(), active_.end());
    std::sort(all.begin(), all.end(), [](const Track& a, const Track& b) { return a.id < b.id; });
    return all;
}

std::vector<Track> run_tracker(const std::vector<SequenceFrame>& sequence, const MatchConfig& cfg) {
    if (sequence.empty()) {
        return {};
    }
    std::optional<FrameDims> dims;
    for (std::size_t i = 0; i < sequence.size(); ++i) {
        const auto& f = sequence[i];
        if (f.index != static_cast<int>(i)) {
            throw InconsistentFrameIndexing("frame at position " + std::to_string(i) +
                                            " has index " + std::to_string(f.index));
        }
        if (!f.frame) {
            throw std::invalid_argument("sequence frame " + std::to_string(i) + " has no raster");
        }
        if (dims && !(f.frame->dims() == *dims)) {
            throw std::invalid_argument("sequence frames differ in size");
        }
        dims = f.frame->dims();
    }

    Tracker tracker(cfg, *dims);
    for (const auto& f : sequence) {
        std::vector<ObservedBox> obs;
        obs.reserve(f.detections.size());
        for (const auto& d : f.detections) {
            obs.push_back(ObservedBox{d, f.homography, f.frame, f.index});
        }
        tracker.step(f.index, std::move(obs));
    }
    return tracker.finish();
}

}  // namespace courtrack

#pragma once

#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "courtrack/assignment.hpp"
#include "courtrack/cost.hpp"

namespace courtrack {

/// Persistent identity. `history` is keyed by frame index.
struct Track {
    int id = 0;
    std::map<int, ObservedBox> history;

    int last_seen() const { return history.rbegin()->first; }
    int first_seen() const { return history.begin()->first; }
};

struct MatchConfig {
    double gate = 0.5;     ///< maximum accepted cost
    int memory_depth = 2;  ///< how many past frames a track stays matchable (1 or 2)
    CostWeights weights{};
    PatchWindow patch{};

    void validate() const;
    /// Sentinel used for padding and for gated-out entries.
    double pad_value() const { return 10.0 * gate; }
};

struct MatchResult {
    /// Per detection (input order): id of the existing track it extends, or nullopt.
    std::vector<std::optional<int>> assignments;
    /// Tracks spawned for unassigned detections, ids in detection order.
    std::vector<Track> new_tracks;
    /// Ids of active tracks that can no longer be matched from frame t + 1 on.
    std::vector<int> retired;
};

/// Cost of extending `track` with `det` at frame t: the minimum similarity
/// cost against the track's boxes at t-1 and (memory depth 2) t-2. nullopt when
/// the track has no box in that window.
std::optional<double> track_cost(const Track& track, const ObservedBox& det, int t,
                                 const MatchConfig& cfg, FrameDims dims);

/// One association step at frame t (the `t` of every detection). Entries above
/// the gate are replaced by the pad value before the solve and rejected after
/// it. New tracks take ids next_id, next_id + 1, ...
MatchResult match_frame(const std::vector<Track>& active, const std::vector<ObservedBox>& dets,
                        int t, const MatchConfig& cfg, FrameDims dims, int next_id);

/// Streaming tracker state.
class Tracker {
public:
    Tracker(MatchConfig cfg, FrameDims dims);

    /// Frames must be fed with consecutive indices starting at 0.
    const MatchResult& step(int t, std::vector<ObservedBox> dets);

    const std::vector<Track>& active() const { return active_; }
    /// All tracks ever created (retired and active), sorted by id.
    std::vector<Track> finish() const;

private:
    MatchConfig cfg_;
    FrameDims dims_;
    int next_t_ = 0;
    int next_id_ = 1;
    std::vector<Track> active_;
    std::vector<Track> retired_;
    MatchResult last_;
};

struct SequenceFrame {
    int index = 0;
    std::vector<Detection> detections;
    Homography homography;
    std::shared_ptr<const FrameRaster> frame;
};

/// Runs the tracker over the whole sequence. Throws InconsistentFrameIndexing
/// unless frame i has index i.
std::vector<Track> run_tracker(const std::vector<SequenceFrame>& sequence, const MatchConfig& cfg);

}  // namespace courtrack

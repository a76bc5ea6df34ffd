#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "courtrack/court.hpp"
#include "courtrack/detect.hpp"
#include "courtrack/errors.hpp"
#include "courtrack/eval.hpp"
#include "courtrack/imaging.hpp"
#include "courtrack/synth.hpp"

namespace courtrack::io {

/// Missing or unreadable file.
class IoError : public Error {
public:
    using Error::Error;
};

// images

FrameRaster read_ppm(const std::filesystem::path& path);
void write_ppm(const std::filesystem::path& path, const FrameRaster& frame);
/// 0 is background; any value above 127 marks a people pixel.
BinaryMask read_pgm_mask(const std::filesystem::path& path);
void write_pgm_mask(const std::filesystem::path& path, const BinaryMask& mask);

/// frame_%06d.ppm
std::string frame_file_name(int index);
/// Loads frame_000000.ppm, frame_000001.ppm, ... until the first missing index.
std::vector<FrameRaster> read_frame_directory(const std::filesystem::path& dir);

// court inputs and output

/// One "x0,y0,x1,y1" segment per line. Blank lines are skipped.
std::vector<LineSegment> read_segments_csv(const std::filesystem::path& path);
/// "h0:h1,s0:s1,v0:v1", hue in degrees, saturation and value in [0, 1].
HsvFilter parse_hsv_filter(const std::string& text);
std::string court_to_json(const CourtRegion& region);
/// Inverse of court_to_json for a frame of the given size.
CourtRegion read_court_json(const std::filesystem::path& path, FrameDims dims);

// detections

struct FrameDetection {
    int frame = 0;
    Detection detection;
};

/// JSON Lines, one detection per line:
/// {"frame": int, "keypoints": [{"part", "x", "y", "c"}], "stage": string}.
std::vector<FrameDetection> read_detections_jsonl(const std::filesystem::path& path);
std::string detection_to_json(int frame, const Detection& det);
void write_detections_jsonl(const std::filesystem::path& path,
                            const std::vector<FrameDetection>& dets);

// homographies

struct HomographySet {
    std::vector<Homography> per_frame;
    std::vector<int> missing;  ///< frames that fell back to identity
};

/// Array of {"frame": int, "h": [9 numbers, row-major]}.
std::map<int, Homography> read_homographies_json(const std::filesystem::path& path);
/// Per-frame list of length n_frames; absent frames get the identity.
HomographySet resolve_homographies(const std::map<int, Homography>& by_frame, int n_frames);
void write_homographies_json(const std::filesystem::path& path,
                             const std::vector<Homography>& per_frame);

// MOT-style boxes

inline constexpr const char* kMotHeader = "frame,id,x_min,y_min,width,height";

/// Shortest round-trip decimal rendering, locale independent.
std::string format_decimal(double v);

std::vector<GroundTruthBox> read_mot_csv(const std::filesystem::path& path);
std::string mot_csv(const std::vector<GroundTruthBox>& rows);
void write_mot_csv(const std::filesystem::path& path, const std::vector<GroundTruthBox>& rows);

// reports

std::string report_to_json(const DetectionReport& r);
std::string report_to_json(const MotReport& r);

// scenario export

/// frames/frame_%06d.ppm, detections.jsonl, homographies.json and gt.csv under `dir`.
void write_scenario(const SyntheticSequence& seq, const std::filesystem::path& dir);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace courtrack::io

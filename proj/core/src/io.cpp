#include "courtrack/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string_view>

#include <nlohmann/json.hpp>

namespace courtrack::io {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_all(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::ofstream open_out(const fs::path& path) {
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    return out;
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string::npos) {
            end = text.size();
        }
        std::string line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        lines.push_back(std::move(line));
        start = end + 1;
    }
    return lines;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(trim(s.substr(start)));
            return out;
        }
        out.push_back(trim(s.substr(start, pos - start)));
        start = pos + 1;
    }
}

template <typename T>
std::optional<T> parse_number(std::string_view s) {
    T v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        return std::nullopt;
    }
    if constexpr (std::is_floating_point_v<T>) {
        if (!std::isfinite(v)) {
            return std::nullopt;
        }
    }
    return v;
}

template <typename T>
T field_number(std::string_view s, const std::string& file, std::size_t line,
               const std::string& field) {
    const auto v = parse_number<T>(s);
    if (!v) {
        throw FormatError(file, line, field, "not a number: '" + std::string(s) + "'");
    }
    return *v;
}

// PNM header: magic, then width, height, maxval separated by whitespace or
// comments, then exactly one whitespace byte before the raster.
struct PnmHeader {
    int w = 0;
    int h = 0;
    std::size_t data_offset = 0;
};

PnmHeader parse_pnm_header(const std::string& bytes, std::string_view magic, const std::string& file) {
    if (bytes.size() < 2 || bytes.compare(0, 2, magic) != 0) {
        throw FormatError(file, 0, "magic", "expected " + std::string(magic));
    }
    std::size_t pos = 2;
    auto next_token = [&](const char* field) {
        for (;;) {
            while (pos < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
            if (pos < bytes.size() && bytes[pos] == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
                continue;
            }
            break;
        }
        const std::size_t start = pos;
        while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos]))) ++pos;
        if (start == pos) {
            throw FormatError(file, 0, field, "missing or non-numeric header value");
        }
        return field_number<int>(std::string_view(bytes).substr(start, pos - start), file, 0, field);
    };
    PnmHeader hdr;
    hdr.w = next_token("width");
    hdr.h = next_token("height");
    const int maxval = next_token("maxval");
    if (hdr.w <= 0 || hdr.h <= 0) {
        throw FormatError(file, 0, "width", "dimensions must be positive");
    }
    if (maxval != 255) {
        throw FormatError(file, 0, "maxval", "only 255 is supported");
    }
    if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos]))) {
        throw FormatError(file, 0, "maxval", "missing separator before raster");
    }
    hdr.data_offset = pos + 1;
    return hdr;
}

}  // namespace

FrameRaster read_ppm(const fs::path& path) {
    const std::string bytes = read_all(path);
    const std::string file = path.string();
    const PnmHeader hdr = parse_pnm_header(bytes, "P6", file);
    const std::size_t n = static_cast<std::size_t>(hdr.w) * static_cast<std::size_t>(hdr.h);
    if (bytes.size() - hdr.data_offset != 3 * n) {
        throw FormatError(file, 0, "raster",
                          "expected " + std::to_string(3 * n) + " bytes, found " +
                              std::to_string(bytes.size() - hdr.data_offset));
    }
    std::vector<Rgb> px(n);
    const auto* src = reinterpret_cast<const unsigned char*>(bytes.data() + hdr.data_offset);
    for (std::size_t i = 0; i < n; ++i) {
        px[i] = Rgb{src[3 * i], src[3 * i + 1], src[3 * i + 2]};
    }
    return FrameRaster(FrameDims{hdr.w, hdr.h}, std::move(px));
}

void write_ppm(const fs::path& path, const FrameRaster& frame) {
    auto out = open_out(path);
    out << "P6\n" << frame.width() << ' ' << frame.height() << "\n255\n";
    std::string raster;
    raster.reserve(frame.pixels().size() * 3);
    for (const auto& p : frame.pixels()) {
        raster.push_back(static_cast<char>(p.r));
        raster.push_back(static_cast<char>(p.g));
        raster.push_back(static_cast<char>(p.b));
    }
    out.write(raster.data(), static_cast<std::streamsize>(raster.size()));
}

BinaryMask read_pgm_mask(const fs::path& path) {
    const std::string bytes = read_all(path);
    const std::string file = path.string();
    const PnmHeader hdr = parse_pnm_header(bytes, "P5", file);
    const std::size_t n = static_cast<std::size_t>(hdr.w) * static_cast<std::size_t>(hdr.h);
    if (bytes.size() - hdr.data_offset != n) {
        throw FormatError(file, 0, "raster",
                          "expected " + std::to_string(n) + " bytes, found " +
                              std::to_string(bytes.size() - hdr.data_offset));
    }
    std::vector<std::uint8_t> bits(n);
    for (std::size_t i = 0; i < n; ++i) {
        bits[i] = static_cast<unsigned char>(bytes[hdr.data_offset + i]) > 127 ? 1 : 0;
    }
    return BinaryMask(FrameDims{hdr.w, hdr.h}, std::move(bits));
}

void write_pgm_mask(const fs::path& path, const BinaryMask& mask) {
    auto out = open_out(path);
    out << "P5\n" << mask.dims().w << ' ' << mask.dims().h << "\n255\n";
    std::string raster;
    raster.reserve(mask.bits().size());
    for (const auto b : mask.bits()) {
        raster.push_back(static_cast<char>(b ? 255 : 0));
    }
    out.write(raster.data(), static_cast<std::streamsize>(raster.size()));
}

std::string frame_file_name(int index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "frame_%06d.ppm", index);
    return buf;
}

std::vector<FrameRaster> read_frame_directory(const fs::path& dir) {
    if (!fs::is_directory(dir)) {
        throw IoError("frames directory not found: " + dir.string());
    }
    std::vector<FrameRaster> frames;
    for (int i = 0;; ++i) {
        const fs::path p = dir / frame_file_name(i);
        if (!fs::exists(p)) {
            break;
        }
        frames.push_back(read_ppm(p));
    }
    return frames;
}

std::vector<LineSegment> read_segments_csv(const fs::path& path) {
    const std::string file = path.string();
    const auto lines = split_lines(read_all(path));
    std::vector<LineSegment> out;
    static const char* names[] = {"x0", "y0", "x1", "y1"};
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto line = trim(lines[i]);
        if (line.empty()) {
            continue;
        }
        const auto cells = split(line, ',');
        if (cells.size() != 4) {
            throw FormatError(file, i + 1, "x0,y0,x1,y1",
                              "expected 4 values, found " + std::to_string(cells.size()));
        }
        double v[4];
        for (int k = 0; k < 4; ++k) {
            v[k] = field_number<double>(cells[static_cast<std::size_t>(k)], file, i + 1, names[k]);
        }
        try {
            out.push_back(LineSegment::make({v[0], v[1]}, {v[2], v[3]}));
        } catch (const std::invalid_argument& e) {
            throw FormatError(file, i + 1, "x1", e.what());
        }
    }
    return out;
}

HsvFilter parse_hsv_filter(const std::string& text) {
    const auto parts = split(text, ',');
    if (parts.size() != 3) {
        throw std::invalid_argument("hsv filter must be 'h0:h1,s0:s1,v0:v1'");
    }
    double v[6];
    for (std::size_t k = 0; k < 3; ++k) {
        const auto range = split(parts[k], ':');
        if (range.size() != 2) {
            throw std::invalid_argument("hsv filter must be 'h0:h1,s0:s1,v0:v1'");
        }
        for (std::size_t j = 0; j < 2; ++j) {
            const auto num = parse_number<double>(range[j]);
            if (!num) {
                throw std::invalid_argument("hsv filter value is not a number: '" +
                                            std::string(range[j]) + "'");
            }
            v[2 * k + j] = *num;
        }
    }
    return HsvFilter::make(v[0], v[1], v[2], v[3], v[4], v[5]);
}

namespace {

json line_json(const Line2& l) { return json::array({l.a, l.b, l.c}); }

}  // namespace

std::string court_to_json(const CourtRegion& region) {
    json j = json::object();
    j["top"] = line_json(region.top);
    j["bottom"] = line_json(region.bottom);
    j["left"] = region.left ? line_json(*region.left) : json(nullptr);
    j["right"] = region.right ? line_json(*region.right) : json(nullptr);
    return j.dump() + "\n";
}

CourtRegion read_court_json(const fs::path& path, FrameDims dims) {
    const std::string file = path.string();
    json doc;
    try {
        doc = json::parse(read_all(path));
    } catch (const json::parse_error& e) {
        throw FormatError(file, 0, "json", e.what());
    }
    if (!doc.is_object()) {
        throw FormatError(file, 0, "json", "expected an object");
    }
    auto line = [&](const char* key, bool optional) -> std::optional<Line2> {
        const auto it = doc.find(key);
        if (it == doc.end() || it->is_null()) {
            if (optional) {
                return std::nullopt;
            }
            throw FormatError(file, 0, key, "missing");
        }
        if (!it->is_array() || it->size() != 3 || !(*it)[0].is_number() || !(*it)[1].is_number() ||
            !(*it)[2].is_number()) {
            throw FormatError(file, 0, key, "expected [a, b, c]");
        }
        try {
            return Line2::make((*it)[0].get<double>(), (*it)[1].get<double>(), (*it)[2].get<double>());
        } catch (const std::invalid_argument& e) {
            throw FormatError(file, 0, key, e.what());
        }
    };
    CourtRegion region;
    region.top = *line("top", false);
    region.bottom = *line("bottom", false);
    region.left = line("left", true);
    region.right = line("right", true);
    region.dims = dims;
    return region;
}

namespace {

template <typename T>
T json_field(const json& obj, const char* key, const std::string& file, std::size_t line,
             const std::string& path) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
        throw FormatError(file, line, path + key, "missing");
    }
    if constexpr (std::is_same_v<T, int>) {
        if (!it->is_number_integer()) {
            throw FormatError(file, line, path + key, "expected an integer");
        }
        return it->template get<int>();
    } else if constexpr (std::is_same_v<T, double>) {
        if (!it->is_number()) {
            throw FormatError(file, line, path + key, "expected a number");
        }
        return it->template get<double>();
    } else {
        if (!it->is_string()) {
            throw FormatError(file, line, path + key, "expected a string");
        }
        return it->template get<std::string>();
    }
}

}  // namespace

std::vector<FrameDetection> read_detections_jsonl(const fs::path& path) {
    const std::string file = path.string();
    const auto lines = split_lines(read_all(path));
    std::vector<FrameDetection> out;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::size_t ln = i + 1;
        if (trim(lines[i]).empty()) {
            continue;
        }
        json obj;
        try {
            obj = json::parse(lines[i]);
        } catch (const json::parse_error& e) {
            throw FormatError(file, ln, "json", e.what());
        }
        if (!obj.is_object()) {
            throw FormatError(file, ln, "json", "expected an object");
        }
        const int frame = json_field<int>(obj, "frame", file, ln, "");
        if (frame < 0) {
            throw FormatError(file, ln, "frame", "must be non-negative");
        }
        Stage stage = Stage::External;
        if (obj.contains("stage")) {
            try {
                stage = stage_from_string(json_field<std::string>(obj, "stage", file, ln, ""));
            } catch (const std::invalid_argument& e) {
                throw FormatError(file, ln, "stage", e.what());
            }
        }
        const auto kit = obj.find("keypoints");
        if (kit == obj.end() || !kit->is_array()) {
            throw FormatError(file, ln, "keypoints", "expected an array");
        }
        std::vector<Keypoint> kps;
        for (std::size_t k = 0; k < kit->size(); ++k) {
            const json& kp = (*kit)[k];
            const std::string prefix = "keypoints[" + std::to_string(k) + "].";
            if (!kp.is_object()) {
                throw FormatError(file, ln, prefix.substr(0, prefix.size() - 1), "expected an object");
            }
            Keypoint p;
            p.part_id = json_field<int>(kp, "part", file, ln, prefix);
            p.position.x = json_field<double>(kp, "x", file, ln, prefix);
            p.position.y = json_field<double>(kp, "y", file, ln, prefix);
            p.confidence = kp.contains("c") ? json_field<double>(kp, "c", file, ln, prefix) : 1.0;
            kps.push_back(p);
        }
        try {
            out.push_back({frame, Detection(std::move(kps), stage)});
        } catch (const std::exception& e) {
            throw FormatError(file, ln, "keypoints", e.what());
        }
    }
    return out;
}

std::string detection_to_json(int frame, const Detection& det) {
    json kps = json::array();
    for (const auto& k : det.keypoints()) {
        kps.push_back({{"part", k.part_id}, {"x", k.position.x}, {"y", k.position.y}, {"c", k.confidence}});
    }
    json obj = {{"frame", frame}, {"keypoints", kps}, {"stage", std::string(to_string(det.stage()))}};
    return obj.dump();
}

void write_detections_jsonl(const fs::path& path, const std::vector<FrameDetection>& dets) {
    auto out = open_out(path);
    for (const auto& d : dets) {
        out << detection_to_json(d.frame, d.detection) << '\n';
    }
}

std::map<int, Homography> read_homographies_json(const fs::path& path) {
    const std::string file = path.string();
    const std::string text = read_all(path);
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
        const auto line = 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n'));
        throw FormatError(file, line, "json", e.what());
    }
    if (!doc.is_array()) {
        throw FormatError(file, 0, "json", "expected an array of {frame, h} objects");
    }
    std::map<int, Homography> out;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const json& entry = doc[i];
        const std::string prefix = "[" + std::to_string(i) + "].";
        if (!entry.is_object()) {
            throw FormatError(file, 0, "[" + std::to_string(i) + "]", "expected an object");
        }
        const int frame = json_field<int>(entry, "frame", file, 0, prefix);
        const auto hit = entry.find("h");
        if (hit == entry.end() || !hit->is_array() || hit->size() != 9) {
            throw FormatError(file, 0, prefix + "h", "expected 9 numbers");
        }
        Homography::Matrix m{};
        for (std::size_t k = 0; k < 9; ++k) {
            if (!(*hit)[k].is_number()) {
                throw FormatError(file, 0, prefix + "h", "expected 9 numbers");
            }
            m[k] = (*hit)[k].get<double>();
        }
        if (out.count(frame)) {
            throw FormatError(file, 0, prefix + "frame", "duplicate frame " + std::to_string(frame));
        }
        try {
            out.emplace(frame, Homography(m));
        } catch (const SingularHomography& e) {
            throw FormatError(file, 0, prefix + "h", e.what());
        }
    }
    return out;
}

HomographySet resolve_homographies(const std::map<int, Homography>& by_frame, int n_frames) {
    HomographySet out;
    for (int t = 0; t < n_frames; ++t) {
        const auto it = by_frame.find(t);
        if (it == by_frame.end()) {
            out.per_frame.push_back(Homography::identity());
            out.missing.push_back(t);
        } else {
            out.per_frame.push_back(it->second);
        }
    }
    return out;
}

void write_homographies_json(const fs::path& path, const std::vector<Homography>& per_frame) {
    json doc = json::array();
    for (std::size_t t = 0; t < per_frame.size(); ++t) {
        const auto& m = per_frame[t].matrix();
        doc.push_back({{"frame", static_cast<int>(t)}, {"h", std::vector<double>(m.begin(), m.end())}});
    }
    auto out = open_out(path);
    out << doc.dump() << '\n';
}

std::string format_decimal(double v) {
    if (v == 0.0) {
        return "0";
    }
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::vector<GroundTruthBox> read_mot_csv(const fs::path& path) {
    const std::string file = path.string();
    const auto lines = split_lines(read_all(path));
    std::vector<GroundTruthBox> out;
    static const char* names[] = {"frame", "id", "x_min", "y_min", "width", "height"};
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto line = trim(lines[i]);
        if (line.empty() || (i == 0 && line == kMotHeader)) {
            continue;
        }
        const auto cells = split(line, ',');
        if (cells.size() != 6) {
            throw FormatError(file, i + 1, kMotHeader,
                              "expected 6 values, found " + std::to_string(cells.size()));
        }
        GroundTruthBox row;
        row.frame = field_number<int>(cells[0], file, i + 1, names[0]);
        row.id = field_number<int>(cells[1], file, i + 1, names[1]);
        double v[4];
        for (std::size_t k = 0; k < 4; ++k) {
            v[k] = field_number<double>(cells[k + 2], file, i + 1, names[k + 2]);
        }
        if (v[2] < 0.0) throw FormatError(file, i + 1, "width", "must be non-negative");
        if (v[3] < 0.0) throw FormatError(file, i + 1, "height", "must be non-negative");
        if (row.frame < 0) throw FormatError(file, i + 1, "frame", "must be non-negative");
        row.bbox = BBox::from_xywh(v[0], v[1], v[2], v[3]);
        out.push_back(row);
    }
    return out;
}

std::string mot_csv(const std::vector<GroundTruthBox>& rows) {
    std::string s = kMotHeader;
    s += '\n';
    for (const auto& r : rows) {
        s += std::to_string(r.frame);
        s += ',';
        s += std::to_string(r.id);
        for (double v : {r.bbox.x_min, r.bbox.y_min, r.bbox.width(), r.bbox.height()}) {
            s += ',';
            s += format_decimal(v);
        }
        s += '\n';
    }
    return s;
}

void write_text(const fs::path& path, const std::string& text) {
    auto out = open_out(path);
    out << text;
}

void write_mot_csv(const fs::path& path, const std::vector<GroundTruthBox>& rows) {
    write_text(path, mot_csv(rows));
}

std::string report_to_json(const DetectionReport& r) {
    json j = {{"precision", r.precision}, {"recall", r.recall}, {"f1", r.f1},
              {"tp", r.tp},               {"fp", r.fp},         {"fn", r.fn}};
    return j.dump() + "\n";
}

std::string report_to_json(const MotReport& r) {
    json j = {{"mota", r.mota},          {"motp", r.motp},
              {"misses", r.misses},      {"fp", r.false_positives},
              {"id_switches", r.id_switches}, {"gt", r.gt_count}};
    return j.dump() + "\n";
}

void write_scenario(const SyntheticSequence& seq, const fs::path& dir) {
    fs::create_directories(dir / "frames");
    for (std::size_t t = 0; t < seq.frames.size(); ++t) {
        write_ppm(dir / "frames" / frame_file_name(static_cast<int>(t)), *seq.frames[t]);
    }
    std::vector<FrameDetection> dets;
    for (std::size_t t = 0; t < seq.detections.size(); ++t) {
        for (const auto& ld : seq.detections[t]) {
            dets.push_back({static_cast<int>(t), ld.detection});
        }
    }
    write_detections_jsonl(dir / "detections.jsonl", dets);
    write_homographies_json(dir / "homographies.json", seq.homographies);
    write_mot_csv(dir / "gt.csv", seq.gt);
}

}  // namespace courtrack::io

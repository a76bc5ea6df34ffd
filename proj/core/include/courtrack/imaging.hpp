#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "courtrack/geometry.hpp"

namespace courtrack {

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Row-major 8-bit RGB frame.
class FrameRaster {
public:
    FrameRaster() = default;
    FrameRaster(FrameDims dims, Rgb fill = {});
    /// Throws std::invalid_argument if pixels.size() != w * h.
    FrameRaster(FrameDims dims, std::vector<Rgb> pixels);

    FrameDims dims() const { return dims_; }
    int width() const { return dims_.w; }
    int height() const { return dims_.h; }
    bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < dims_.w && y < dims_.h; }

    const Rgb& at(int x, int y) const { return pixels_[index(x, y)]; }
    Rgb& at(int x, int y) { return pixels_[index(x, y)]; }
    const std::vector<Rgb>& pixels() const { return pixels_; }

    /// Fills pixels whose integer coordinates fall in [x_min, x_max) x [y_min, y_max).
    void fill_box(const BBox& box, Rgb color);

    /// Copy of the window [x, x + w) x [y, y + h); must lie inside the frame.
    FrameRaster crop(int x, int y, int w, int h) const;
    /// Nearest-neighbour resample to the given dimensions.
    FrameRaster resize_nearest(FrameDims target) const;

    friend bool operator==(const FrameRaster&, const FrameRaster&) = default;

private:
    std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(dims_.w) +
               static_cast<std::size_t>(x);
    }

    FrameDims dims_{};
    std::vector<Rgb> pixels_;
};

struct HsvPixel {
    double h = 0.0;  ///< degrees, [0, 360)
    double s = 0.0;  ///< [0, 1]
    double v = 0.0;  ///< [0, 1]
};

/// Standard hexcone conversion. Achromatic pixels get hue 0.
HsvPixel rgb_to_hsv(Rgb p);
/// Inverse of rgb_to_hsv, rounding each channel to the nearest integer.
Rgb hsv_to_rgb(const HsvPixel& p);

/// Row-major boolean mask; true marks a people pixel.
class BinaryMask {
public:
    BinaryMask() = default;
    explicit BinaryMask(FrameDims dims, bool fill = false);
    BinaryMask(FrameDims dims, std::vector<std::uint8_t> bits);

    FrameDims dims() const { return dims_; }
    bool at(int x, int y) const { return bits_[index(x, y)] != 0; }
    void set(int x, int y, bool value) { bits_[index(x, y)] = value ? 1 : 0; }
    const std::vector<std::uint8_t>& bits() const { return bits_; }

    friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

private:
    std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(dims_.w) +
               static_cast<std::size_t>(x);
    }

    FrameDims dims_{};
    std::vector<std::uint8_t> bits_;
};

/// Square neighbourhood around a keypoint: integer offsets in
/// [-half_extent, half_extent - 1]^2, so the default 12 gives 24x24 = 576 cells.
struct PatchWindow {
    int half_extent = 12;

    static PatchWindow make(int half_extent);
    int extent() const { return 2 * half_extent; }
    int cell_count() const { return extent() * extent(); }
};

/// Mean over valid offsets of the per-pixel L1/3 colour difference, scaled by
/// 1/255. Keypoints are rounded to the nearest pixel. Offsets leaving either
/// frame are skipped; throws EmptyOverlap when none remain.
double patch_mean_abs_diff(const FrameRaster& f1, Point2 p1, const FrameRaster& f2, Point2 p2,
                           PatchWindow win = {});

using PixelRegion = std::function<bool(Point2)>;

/// Fraction of true mask pixels among pixels (at integer coordinates) for which
/// `region` holds. Throws EmptyRegion if the region selects no pixel.
double mask_fraction(const BinaryMask& mask, const PixelRegion& region);

}  // namespace courtrack

#include "courtrack/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "courtrack/errors.hpp"

namespace courtrack {

FrameRaster::FrameRaster(FrameDims dims, Rgb fill)
    : dims_(FrameDims::make(dims.w, dims.h)),
      pixels_(static_cast<std::size_t>(dims.pixel_count()), fill) {}

FrameRaster::FrameRaster(FrameDims dims, std::vector<Rgb> pixels)
    : dims_(FrameDims::make(dims.w, dims.h)), pixels_(std::move(pixels)) {
    if (pixels_.size() != static_cast<std::size_t>(dims_.pixel_count())) {
        throw std::invalid_argument("pixel count does not match frame dimensions");
    }
}

void FrameRaster::fill_box(const BBox& box, Rgb color) {
    const int x0 = std::max(0, static_cast<int>(std::ceil(box.x_min)));
    const int y0 = std::max(0, static_cast<int>(std::ceil(box.y_min)));
    const int x1 = std::min(dims_.w, static_cast<int>(std::ceil(box.x_max)));
    const int y1 = std::min(dims_.h, static_cast<int>(std::ceil(box.y_max)));
    for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) {
            at(x, y) = color;
        }
    }
}

FrameRaster FrameRaster::crop(int x, int y, int w, int h) const {
    if (x < 0 || y < 0 || w <= 0 || h <= 0 || x + w > dims_.w || y + h > dims_.h) {
        throw std::invalid_argument("crop window leaves the frame");
    }
    FrameRaster out(FrameDims{w, h});
    for (int r = 0; r < h; ++r) {
        const auto src = pixels_.begin() + static_cast<std::ptrdiff_t>(index(x, y + r));
        std::copy(src, src + w, out.pixels_.begin() + static_cast<std::ptrdiff_t>(out.index(0, r)));
    }
    return out;
}

FrameRaster FrameRaster::resize_nearest(FrameDims target) const {
    FrameRaster out(target);
    const double sx = static_cast<double>(dims_.w) / target.w;
    const double sy = static_cast<double>(dims_.h) / target.h;
    for (int y = 0; y < target.h; ++y) {
        const int src_y = std::min(dims_.h - 1, static_cast<int>((y + 0.5) * sy));
        for (int x = 0; x < target.w; ++x) {
            const int src_x = std::min(dims_.w - 1, static_cast<int>((x + 0.5) * sx));
            out.at(x, y) = at(src_x, src_y);
        }
    }
    return out;
}

HsvPixel rgb_to_hsv(Rgb p) {
    const double r = p.r / 255.0;
    const double g = p.g / 255.0;
    const double b = p.b / 255.0;
    const double mx = std::max({r, g, b});
    const double mn = std::min({r, g, b});
    const double chroma = mx - mn;

    HsvPixel out;
    out.v = mx;
    out.s = mx > 0.0 ? chroma / mx : 0.0;
    if (chroma <= 0.0) {
        out.h = 0.0;
        return out;
    }
    double hue;
    if (mx == r) {
        hue = std::fmod((g - b) / chroma, 6.0);
    } else if (mx == g) {
        hue = (b - r) / chroma + 2.0;
    } else {
        hue = (r - g) / chroma + 4.0;
    }
    hue *= 60.0;
    if (hue < 0.0) {
        hue += 360.0;
    }
    if (hue >= 360.0) {
        hue -= 360.0;
    }
    out.h = hue;
    return out;
}

Rgb hsv_to_rgb(const HsvPixel& p) {
    const double c = p.v * p.s;
    const double hp = p.h / 60.0;
    const double x = c * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
    double r = 0, g = 0, b = 0;
    switch (static_cast<int>(hp) % 6) {
        case 0: r = c, g = x; break;
        case 1: r = x, g = c; break;
        case 2: g = c, b = x; break;
        case 3: g = x, b = c; break;
        case 4: r = x, b = c; break;
        default: r = c, b = x; break;
    }
    const double m = p.v - c;
    auto to8 = [](double v) {
        return static_cast<std::uint8_t>(std::clamp(std::lround(v * 255.0), 0L, 255L));
    };
    return {to8(r + m), to8(g + m), to8(b + m)};
}

BinaryMask::BinaryMask(FrameDims dims, bool fill)
    : dims_(FrameDims::make(dims.w, dims.h)),
      bits_(static_cast<std::size_t>(dims.pixel_count()), fill ? 1 : 0) {}

BinaryMask::BinaryMask(FrameDims dims, std::vector<std::uint8_t> bits)
    : dims_(FrameDims::make(dims.w, dims.h)), bits_(std::move(bits)) {
    if (bits_.size() != static_cast<std::size_t>(dims_.pixel_count())) {
        throw std::invalid_argument("mask size does not match frame dimensions");
    }
    for (auto& b : bits_) {
        b = b != 0 ? 1 : 0;
    }
}

PatchWindow PatchWindow::make(int half_extent) {
    if (half_extent < 1) {
        throw std::invalid_argument("patch half extent must be at least 1");
    }
    return PatchWindow{half_extent};
}

double patch_mean_abs_diff(const FrameRaster& f1, Point2 p1, const FrameRaster& f2, Point2 p2,
                           PatchWindow win) {
    if (!std::isfinite(p1.x) || !std::isfinite(p1.y) || !std::isfinite(p2.x) ||
        !std::isfinite(p2.y)) {
        throw std::invalid_argument("patch anchors must be finite");
    }
    const long ax1 = std::lround(p1.x);
    const long ay1 = std::lround(p1.y);
    const long ax2 = std::lround(p2.x);
    const long ay2 = std::lround(p2.y);

    long long sum = 0;  // sum of per-pixel channel L1 distances
    long long valid = 0;
    for (int dy = -win.half_extent; dy < win.half_extent; ++dy) {
        for (int dx = -win.half_extent; dx < win.half_extent; ++dx) {
            const long x1 = ax1 + dx, y1 = ay1 + dy;
            const long x2 = ax2 + dx, y2 = ay2 + dy;
            if (x1 < 0 || y1 < 0 || x1 >= f1.width() || y1 >= f1.height() || x2 < 0 || y2 < 0 ||
                x2 >= f2.width() || y2 >= f2.height()) {
                continue;
            }
            const Rgb& a = f1.at(static_cast<int>(x1), static_cast<int>(y1));
            const Rgb& b = f2.at(static_cast<int>(x2), static_cast<int>(y2));
            sum += std::abs(a.r - b.r) + std::abs(a.g - b.g) + std::abs(a.b - b.b);
            ++valid;
        }
    }
    if (valid == 0) {
        throw EmptyOverlap("patch windows share no in-frame offset");
    }
    return static_cast<double>(sum) / (3.0 * 255.0 * static_cast<double>(valid));
}

double mask_fraction(const BinaryMask& mask, const PixelRegion& region) {
    const FrameDims d = mask.dims();
    long long inside = 0;
    long long hits = 0;
    for (int y = 0; y < d.h; ++y) {
        for (int x = 0; x < d.w; ++x) {
            if (!region(Point2{static_cast<double>(x), static_cast<double>(y)})) {
                continue;
            }
            ++inside;
            hits += mask.at(x, y) ? 1 : 0;
        }
    }
    if (inside == 0) {
        throw EmptyRegion("region selects no pixel of the mask");
    }
    return static_cast<double>(hits) / static_cast<double>(inside);
}

}  // namespace courtrack

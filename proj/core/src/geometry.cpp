#include "courtrack/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "courtrack/errors.hpp"

namespace courtrack {

double distance(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

FrameDims FrameDims::make(int w, int h) {
    if (w <= 0 || h <= 0) {
        throw std::invalid_argument("frame dimensions must be positive");
    }
    return {w, h};
}

double FrameDims::diagonal() const {
    return std::hypot(static_cast<double>(w), static_cast<double>(h));
}

BBox BBox::make(double x_min, double y_min, double x_max, double y_max) {
    if (!std::isfinite(x_min) || !std::isfinite(y_min) || !std::isfinite(x_max) ||
        !std::isfinite(y_max)) {
        throw std::invalid_argument("bbox coordinates must be finite");
    }
    if (x_min > x_max || y_min > y_max) {
        throw std::invalid_argument("bbox extents are inverted");
    }
    return {x_min, y_min, x_max, y_max};
}

BBox BBox::from_xywh(double x, double y, double w, double h) { return make(x, y, x + w, y + h); }

Line2 Line2::make(double a, double b, double c) {
    const double n = std::hypot(a, b);
    if (!(n > 0.0) || !std::isfinite(n) || !std::isfinite(c)) {
        throw std::invalid_argument("line normal must be a finite nonzero vector");
    }
    return {a / n, b / n, c / n};
}

Line2 Line2::through(Point2 p0, Point2 p1) {
    const double dx = p1.x - p0.x;
    const double dy = p1.y - p0.y;
    // normal (-dy, dx)
    return make(-dy, dx, dy * p0.x - dx * p0.y);
}

Homography::Homography() : m_{1, 0, 0, 0, 1, 0, 0, 0, 1} {}

Homography::Homography(const Matrix& m) : m_(m) {
    for (double v : m_) {
        if (!std::isfinite(v)) {
            throw SingularHomography("homography has non-finite entries");
        }
    }
    if (std::abs(determinant()) <= 1e-12) {
        throw SingularHomography("homography is singular");
    }
}

Homography Homography::translation(double tx, double ty) {
    return Homography({1, 0, tx, 0, 1, ty, 0, 0, 1});
}

Homography Homography::rotation(double radians, Point2 center) {
    const double c = std::cos(radians);
    const double s = std::sin(radians);
    // T(center) * R * T(-center)
    return Homography({c, -s, center.x - c * center.x + s * center.y,  //
                       s, c, center.y - s * center.x - c * center.y,   //
                       0, 0, 1});
}

double Homography::determinant() const {
    const auto& m = m_;
    return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
           m[2] * (m[3] * m[7] - m[4] * m[6]);
}

Homography Homography::inverse() const {
    const auto& m = m_;
    const double det = determinant();
    Matrix inv{
        (m[4] * m[8] - m[5] * m[7]) / det, (m[2] * m[7] - m[1] * m[8]) / det,
        (m[1] * m[5] - m[2] * m[4]) / det, (m[5] * m[6] - m[3] * m[8]) / det,
        (m[0] * m[8] - m[2] * m[6]) / det, (m[2] * m[3] - m[0] * m[5]) / det,
        (m[3] * m[7] - m[4] * m[6]) / det, (m[1] * m[6] - m[0] * m[7]) / det,
        (m[0] * m[4] - m[1] * m[3]) / det,
    };
    return Homography(inv);
}

Homography operator*(const Homography& lhs, const Homography& rhs) {
    Homography::Matrix out{};
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
            double acc = 0.0;
            for (int k = 0; k < 3; ++k) {
                acc += lhs(r, k) * rhs(k, c);
            }
            out[r * 3 + c] = acc;
        }
    }
    return Homography(out);
}

Point2 apply_homography(const Homography& h, Point2 p) {
    const double x = h(0, 0) * p.x + h(0, 1) * p.y + h(0, 2);
    const double y = h(1, 0) * p.x + h(1, 1) * p.y + h(1, 2);
    const double w = h(2, 0) * p.x + h(2, 1) * p.y + h(2, 2);
    if (!(std::abs(w) > kProjectionEpsilon)) {
        throw DegenerateProjection("point projects to infinity");
    }
    return {x / w, y / w};
}

BBox transform_bbox(const Homography& h, const BBox& b) {
    const std::array<Point2, 4> corners{{
        apply_homography(h, {b.x_min, b.y_min}),
        apply_homography(h, {b.x_max, b.y_min}),
        apply_homography(h, {b.x_max, b.y_max}),
        apply_homography(h, {b.x_min, b.y_max}),
    }};
    BBox out{corners[0].x, corners[0].y, corners[0].x, corners[0].y};
    for (const auto& p : corners) {
        out.x_min = std::min(out.x_min, p.x);
        out.y_min = std::min(out.y_min, p.y);
        out.x_max = std::max(out.x_max, p.x);
        out.y_max = std::max(out.y_max, p.y);
    }
    return out;
}

double iou(const BBox& b1, const BBox& b2) {
    const double iw = std::min(b1.x_max, b2.x_max) - std::max(b1.x_min, b2.x_min);
    const double ih = std::min(b1.y_max, b2.y_max) - std::max(b1.y_min, b2.y_min);
    const double inter = (iw > 0.0 && ih > 0.0) ? iw * ih : 0.0;
    const double uni = b1.area() + b2.area() - inter;
    if (!(uni > 0.0)) {
        return 0.0;
    }
    return std::clamp(inter / uni, 0.0, 1.0);
}

double normalized_centroid_distance(const Homography& h1, const Homography& h2, const BBox& b1,
                                    const BBox& b2, FrameDims dims) {
    const Point2 p1 = apply_homography(h1, b1.centroid());
    const Point2 p2 = apply_homography(h2, b2.centroid());
    return distance(p1, p2) / dims.diagonal();
}

}  // namespace courtrack

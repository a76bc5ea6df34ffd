#pragma once

#include <array>
#include <optional>

namespace courtrack {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2&, const Point2&) = default;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }

double distance(Point2 a, Point2 b);

struct FrameDims {
    int w = 0;
    int h = 0;

    /// Throws std::invalid_argument unless both extents are positive.
    static FrameDims make(int w, int h);

    double diagonal() const;
    long long pixel_count() const { return static_cast<long long>(w) * h; }

    friend bool operator==(const FrameDims&, const FrameDims&) = default;
};

/// Axis-aligned box in continuous pixel coordinates.
struct BBox {
    double x_min = 0.0;
    double y_min = 0.0;
    double x_max = 0.0;
    double y_max = 0.0;

    /// Validating constructor; throws std::invalid_argument on inverted extents
    /// or non-finite coordinates.
    static BBox make(double x_min, double y_min, double x_max, double y_max);
    static BBox from_xywh(double x, double y, double w, double h);

    double width() const { return x_max - x_min; }
    double height() const { return y_max - y_min; }
    double area() const { return width() * height(); }
    Point2 centroid() const { return {0.5 * (x_min + x_max), 0.5 * (y_min + y_max)}; }
    Point2 bottom_center() const { return {0.5 * (x_min + x_max), y_max}; }

    friend bool operator==(const BBox&, const BBox&) = default;
};

/// Line a*x + b*y + c = 0 with a^2 + b^2 = 1.
struct Line2 {
    double a = 0.0;
    double b = 1.0;
    double c = 0.0;

    /// Normalizes (a, b, c) by the length of (a, b). Throws std::invalid_argument
    /// when (a, b) is the zero vector.
    static Line2 make(double a, double b, double c);
    static Line2 through(Point2 p0, Point2 p1);
    static Line2 horizontal(double y) { return {0.0, 1.0, -y}; }
    static Line2 vertical(double x) { return {1.0, 0.0, -x}; }

    double signed_distance(Point2 p) const { return a * p.x + b * p.y + c; }
    Line2 negated() const { return {-a, -b, -c}; }
    /// Same normal, shifted so that it passes through p.
    Line2 parallel_through(Point2 p) const { return {a, b, -(a * p.x + b * p.y)}; }
};

/// Row-major 3x3 projective transform.
class Homography {
public:
    using Matrix = std::array<double, 9>;

    /// Identity.
    Homography();
    /// Throws SingularHomography when |det| <= 1e-12.
    explicit Homography(const Matrix& m);

    static Homography identity() { return {}; }
    static Homography translation(double tx, double ty);
    static Homography rotation(double radians, Point2 center = {});

    const Matrix& matrix() const { return m_; }
    double operator()(int row, int col) const { return m_[row * 3 + col]; }
    double determinant() const;
    Homography inverse() const;

    /// Composition: (lhs * rhs)(p) = lhs(rhs(p)).
    friend Homography operator*(const Homography& lhs, const Homography& rhs);
    friend bool operator==(const Homography&, const Homography&) = default;

private:
    Matrix m_;
};

inline constexpr double kProjectionEpsilon = 1e-12;

/// Euclidean projection of H * (x, y, 1). Throws DegenerateProjection when the
/// third homogeneous coordinate vanishes.
Point2 apply_homography(const Homography& h, Point2 p);

/// Axis-aligned hull of the four projected corners.
BBox transform_bbox(const Homography& h, const BBox& b);

/// Intersection over union; 0 when the union has zero area.
double iou(const BBox& b1, const BBox& b2);

/// ||H1(c1) - H2(c2)|| / sqrt(w^2 + h^2) where c1, c2 are the box centroids.
double normalized_centroid_distance(const Homography& h1, const Homography& h2, const BBox& b1,
                                    const BBox& b2, FrameDims dims);

}  // namespace courtrack

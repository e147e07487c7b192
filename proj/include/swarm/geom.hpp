#pragma once

#include <array>
#include <cmath>
#include <optional>

namespace swarm {

inline constexpr double kPi = 3.14159265358979323846;

/// Speeds at or below this are treated as "not moving" by heading and
/// angle computations.
inline constexpr double kSpeedEpsilon = 1e-9;

struct Vec3 {
    double x{0.0};
    double y{0.0};
    double z{0.0};

    constexpr Vec3() = default;
    constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Vec3 operator-() const { return {-x, -y, -z}; }
    constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }

    constexpr Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    constexpr Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    constexpr Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }

    constexpr double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
    constexpr double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }

    constexpr bool operator==(const Vec3&) const = default;
};

constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

constexpr double norm2(const Vec3& v) { return dot(v, v); }
inline double norm(const Vec3& v) { return std::sqrt(norm2(v)); }
inline double distance(const Vec3& a, const Vec3& b) { return norm(a - b); }

inline bool is_finite(const Vec3& v) {
    return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

/// Componentwise (Hadamard) product; used for diagonal gain matrices.
constexpr Vec3 hadamard(const Vec3& a, const Vec3& b) { return {a.x * b.x, a.y * b.y, a.z * b.z}; }

struct Mat2 {
    std::array<double, 4> m{1.0, 0.0, 0.0, 1.0};  // row-major

    constexpr double operator()(int r, int c) const { return m[static_cast<std::size_t>(2 * r + c)]; }
    constexpr double& operator()(int r, int c) { return m[static_cast<std::size_t>(2 * r + c)]; }

    /// Applies the matrix to the (x, y) part of v; z passes through.
    constexpr Vec3 apply_xy(const Vec3& v) const {
        return {m[0] * v.x + m[1] * v.y, m[2] * v.x + m[3] * v.y, v.z};
    }

    constexpr Mat2 transposed() const { return Mat2{{m[0], m[2], m[1], m[3]}}; }
    constexpr double det() const { return m[0] * m[3] - m[1] * m[2]; }
    Mat2 operator*(const Mat2& o) const;
};

struct Mat3 {
    std::array<double, 9> m{1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0};  // row-major

    static constexpr Mat3 identity() { return Mat3{}; }
    static constexpr Mat3 diagonal(const Vec3& d) {
        return Mat3{{d.x, 0.0, 0.0, 0.0, d.y, 0.0, 0.0, 0.0, d.z}};
    }

    constexpr double operator()(int r, int c) const { return m[static_cast<std::size_t>(3 * r + c)]; }
    constexpr double& operator()(int r, int c) { return m[static_cast<std::size_t>(3 * r + c)]; }

    constexpr Vec3 operator*(const Vec3& v) const {
        return {m[0] * v.x + m[1] * v.y + m[2] * v.z,
                m[3] * v.x + m[4] * v.y + m[5] * v.z,
                m[6] * v.x + m[7] * v.y + m[8] * v.z};
    }

    Mat3 operator*(const Mat3& o) const;
    Mat3 transposed() const;
    double det() const;
};

// Elementary rotations about the body axes.
Mat3 rot_x(double alpha);
Mat3 rot_y(double alpha);
Mat3 rot_z(double alpha);

/// Planar rotation [[cos a, -sin a], [sin a, cos a]].
Mat2 rot2(double alpha);

/// Composite body rotation R_x(0) * R_y(alpha) * R_z(alpha). The x-axis factor
/// is held at identity, so both remaining factors share the one angle.
Mat3 rot3(double alpha);

/// Distance-scheduled deflection angle. Rises linearly from 0 at the
/// detection range to pi/2 at the safety range, and is 0 outside the band
/// (r_s, r_d). At exactly dist == r_s the closure value pi/2 is returned.
/// Throws std::invalid_argument unless 0 < r_s < r_d.
double avoidance_angle(double dist, double r_s, double r_d);

/// Angle in [0, pi] between u and v, or nullopt when either is shorter than
/// kSpeedEpsilon.
std::optional<double> angle_between(const Vec3& u, const Vec3& v);

/// Wraps an angle into (-pi, pi].
double wrap_angle(double a);

}  // namespace swarm

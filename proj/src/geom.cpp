#include "swarm/geom.hpp"

#include <algorithm>
#include <stdexcept>

namespace swarm {

Mat2 Mat2::operator*(const Mat2& o) const {
    Mat2 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            r(i, j) = (*this)(i, 0) * o(0, j) + (*this)(i, 1) * o(1, j);
    return r;
}

Mat3 Mat3::operator*(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            r(i, j) = (*this)(i, 0) * o(0, j) + (*this)(i, 1) * o(1, j) + (*this)(i, 2) * o(2, j);
    return r;
}

Mat3 Mat3::transposed() const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            r(i, j) = (*this)(j, i);
    return r;
}

double Mat3::det() const {
    const auto& a = *this;
    return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1))
         - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0))
         + a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
}

Mat3 rot_x(double alpha) {
    const double c = std::cos(alpha), s = std::sin(alpha);
    return Mat3{{1.0, 0.0, 0.0, 0.0, c, -s, 0.0, s, c}};
}

Mat3 rot_y(double alpha) {
    const double c = std::cos(alpha), s = std::sin(alpha);
    return Mat3{{c, 0.0, s, 0.0, 1.0, 0.0, -s, 0.0, c}};
}

Mat3 rot_z(double alpha) {
    const double c = std::cos(alpha), s = std::sin(alpha);
    return Mat3{{c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0}};
}

Mat2 rot2(double alpha) {
    const double c = std::cos(alpha), s = std::sin(alpha);
    return Mat2{{c, -s, s, c}};
}

Mat3 rot3(double alpha) {
    return Mat3::identity() * rot_y(alpha) * rot_z(alpha);
}

double avoidance_angle(double dist, double r_s, double r_d) {
    if (!(r_s > 0.0) || !(r_s < r_d))
        throw std::invalid_argument("avoidance_angle: requires 0 < r_s < r_d");
    if (dist == r_s) return kPi / 2.0;
    if (dist <= r_s || dist >= r_d) return 0.0;
    const double a = (kPi / 2.0) * (r_d - dist) / (r_d - r_s);
    return std::clamp(a, 0.0, kPi / 2.0);
}

std::optional<double> angle_between(const Vec3& u, const Vec3& v) {
    const double nu = norm(u), nv = norm(v);
    if (nu <= kSpeedEpsilon || nv <= kSpeedEpsilon) return std::nullopt;
    const double c = std::clamp(dot(u, v) / (nu * nv), -1.0, 1.0);
    return std::acos(c);
}

double wrap_angle(double a) {
    a = std::remainder(a, 2.0 * kPi);  // [-pi, pi]
    if (a <= -kPi) a += 2.0 * kPi;
    return a;
}

}  // namespace swarm

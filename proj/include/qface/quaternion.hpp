#ifndef QFACE_QUATERNION_HPP
#define QFACE_QUATERNION_HPP

#include <cmath>

namespace qface {

/// Quaternion scalar q = w + x i + y j + z k with i^2 = j^2 = k^2 = ijk = -1.
/// Multiplication is the Hamilton product and does not commute.
struct Quaternion {
    double w = 0.0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Quaternion() = default;
    constexpr Quaternion(double w_, double x_, double y_, double z_)
        : w(w_), x(x_), y(y_), z(z_) {}

    static constexpr Quaternion real(double v) { return {v, 0.0, 0.0, 0.0}; }

    constexpr Quaternion conj() const { return {w, -x, -y, -z}; }

    double norm_sq() const { return w * w + x * x + y * y + z * z; }
    double norm() const { return std::sqrt(norm_sq()); }

    constexpr bool is_real(double tol = 0.0) const {
        return std::abs(x) <= tol && std::abs(y) <= tol && std::abs(z) <= tol;
    }

    constexpr Quaternion operator-() const { return {-w, -x, -y, -z}; }

    constexpr Quaternion& operator+=(const Quaternion& o) {
        w += o.w; x += o.x; y += o.y; z += o.z;
        return *this;
    }
    constexpr Quaternion& operator-=(const Quaternion& o) {
        w -= o.w; x -= o.x; y -= o.y; z -= o.z;
        return *this;
    }
    constexpr Quaternion& operator*=(double s) {
        w *= s; x *= s; y *= s; z *= s;
        return *this;
    }
};

constexpr Quaternion operator+(Quaternion a, const Quaternion& b) { return a += b; }
constexpr Quaternion operator-(Quaternion a, const Quaternion& b) { return a -= b; }
constexpr Quaternion operator*(Quaternion a, double s) { return a *= s; }
constexpr Quaternion operator*(double s, Quaternion a) { return a *= s; }

/// Hamilton product.
constexpr Quaternion operator*(const Quaternion& a, const Quaternion& b) {
    return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

constexpr Quaternion qmul(const Quaternion& a, const Quaternion& b) { return a * b; }

constexpr bool operator==(const Quaternion& a, const Quaternion& b) {
    return a.w == b.w && a.x == b.x && a.y == b.y && a.z == b.z;
}

}  // namespace qface

#endif  // QFACE_QUATERNION_HPP

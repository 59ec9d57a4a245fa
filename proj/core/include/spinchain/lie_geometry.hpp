#pragma once

// so(3) identified with (R^3, x): vectors, the Lie bracket, rotations and the
// area form on the radius-1 adjoint orbit.

#include <array>
#include <cmath>
#include <iosfwd>

namespace spinchain {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Vec3() = default;
    constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    // Throws DomainError when a component is NaN or infinite.
    static Vec3 checked(double x, double y, double z);

    constexpr double operator[](int k) const { return k == 0 ? x : (k == 1 ? y : z); }

    constexpr Vec3& operator+=(const Vec3& o) {
        x += o.x; y += o.y; z += o.z;
        return *this;
    }
    constexpr Vec3& operator-=(const Vec3& o) {
        x -= o.x; y -= o.y; z -= o.z;
        return *this;
    }
    constexpr Vec3& operator*=(double s) {
        x *= s; y *= s; z *= s;
        return *this;
    }

    double norm() const { return std::sqrt(x * x + y * y + z * z); }
    constexpr double norm2() const { return x * x + y * y + z * z; }

    friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
constexpr Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
constexpr Vec3 operator/(const Vec3& a, double s) { return {a.x / s, a.y / s, a.z / s}; }

inline constexpr Vec3 e1{1.0, 0.0, 0.0};
inline constexpr Vec3 e2{0.0, 1.0, 0.0};
inline constexpr Vec3 e3{0.0, 0.0, 1.0};

// Lie bracket [u, v] = u x v.
constexpr Vec3 cross(const Vec3& u, const Vec3& v) {
    return {u.y * v.z - u.z * v.y, u.z * v.x - u.x * v.z, u.x * v.y - u.y * v.x};
}

constexpr double dot(const Vec3& u, const Vec3& v) { return u.x * v.x + u.y * v.y + u.z * v.z; }

// Determinant of the matrix with rows a, b, c.
constexpr double det3(const Vec3& a, const Vec3& b, const Vec3& c) { return dot(a, cross(b, c)); }

inline double distance(const Vec3& a, const Vec3& b) { return (a - b).norm(); }

std::ostream& operator<<(std::ostream& os, const Vec3& v);

// A point of the unit sphere S^2. |v| is within 1e-12 of 1 by construction.
class UnitVec3 {
public:
    static constexpr double kNormTolerance = 1e-12;

    // Accepts v only if it is already unit length; throws DomainError otherwise.
    explicit UnitVec3(const Vec3& v);
    UnitVec3(double x, double y, double z) : UnitVec3(Vec3{x, y, z}) {}

    // Projects a non-zero vector onto the sphere.
    static UnitVec3 normalized(const Vec3& v);

    const Vec3& vec() const noexcept { return v_; }
    operator const Vec3&() const noexcept { return v_; }  // NOLINT: a unit vector is a vector
    double x() const noexcept { return v_.x; }
    double y() const noexcept { return v_.y; }
    double z() const noexcept { return v_.z; }

    UnitVec3 operator-() const { return UnitVec3{-v_, Unchecked{}}; }

    friend bool operator==(const UnitVec3&, const UnitVec3&) = default;

private:
    struct Unchecked {};
    UnitVec3(const Vec3& v, Unchecked) : v_(v) {}
    Vec3 v_;
};

inline const UnitVec3 kE1{e1};
inline const UnitVec3 kE2{e2};
inline const UnitVec3 kE3{e3};

// Time-t flow of the linear field w -> axis x w: rotation about axis/|axis| by the
// angle t*|axis|, counterclockwise seen from the tip of axis. Throws DomainError on a
// zero axis.
Vec3 rotate(const Vec3& w, const Vec3& axis, double t);
UnitVec3 rotate(const UnitVec3& w, const Vec3& axis, double t);

// Area form on the unit sphere at z: <z, a x b>. Both a and b must be tangent at z
// to within kTangencyTolerance (relative to max(1, |a|)); otherwise DomainError.
inline constexpr double kTangencyTolerance = 1e-10;
double symplectic_form(const UnitVec3& z, const Vec3& a, const Vec3& b);

// w - <w, z> z.
constexpr Vec3 project_tangent(const Vec3& z, const Vec3& w) { return w - dot(w, z) * z; }

}  // namespace spinchain

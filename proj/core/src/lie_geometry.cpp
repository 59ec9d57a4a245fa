#include "spinchain/lie_geometry.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

#include "spinchain/errors.hpp"

namespace spinchain {

Vec3 Vec3::checked(double x, double y, double z) {
    if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z)) {
        throw DomainError("Vec3: non-finite component");
    }
    return {x, y, z};
}

std::ostream& operator<<(std::ostream& os, const Vec3& v) {
    return os << '(' << v.x << ", " << v.y << ", " << v.z << ')';
}

UnitVec3::UnitVec3(const Vec3& v) : v_(v) {
    if (!std::isfinite(v.x) || !std::isfinite(v.y) || !std::isfinite(v.z)) {
        throw DomainError("UnitVec3: non-finite component");
    }
    const double n = v.norm();
    if (std::abs(n - 1.0) > kNormTolerance) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "UnitVec3: |v| = " << n << " is not unit";
        throw DomainError(msg.str());
    }
}

UnitVec3 UnitVec3::normalized(const Vec3& v) {
    const double n = v.norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw DomainError("UnitVec3::normalized: zero or non-finite vector");
    }
    return UnitVec3{v / n, Unchecked{}};
}

Vec3 rotate(const Vec3& w, const Vec3& axis, double t) {
    const double n = axis.norm();
    if (!(n > 0.0)) {
        throw DomainError("rotate: zero rotation axis");
    }
    const Vec3 k = axis / n;
    const double angle = t * n;
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    // Rodrigues: w cos + (k x w) sin + k <k, w> (1 - cos).
    return c * w + s * cross(k, w) + ((1.0 - c) * dot(k, w)) * k;
}

UnitVec3 rotate(const UnitVec3& w, const Vec3& axis, double t) {
    // Rodrigues keeps |w| to round-off; renormalize so the unit invariant is exact.
    return UnitVec3::normalized(rotate(w.vec(), axis, t));
}

double symplectic_form(const UnitVec3& z, const Vec3& a, const Vec3& b) {
    const Vec3& n = z.vec();
    if (std::abs(dot(a, n)) > kTangencyTolerance * std::max(1.0, a.norm()) ||
        std::abs(dot(b, n)) > kTangencyTolerance * std::max(1.0, b.norm())) {
        throw DomainError("symplectic_form: arguments are not tangent to the sphere");
    }
    return dot(n, cross(a, b));
}

}  // namespace spinchain

#pragma once

// The three-spin chain on S^2 x S^2 x S^2 and its integrals
//   H = |X + Y + Z|,  I = <X + Y + Z, e3>,  J = det(X, Y, Z),
// together with their Hamiltonian vector fields, the Poisson bracket and the
// N-spin generalizations H_N, I_v, J.

#include <array>
#include <span>
#include <vector>

#include "spinchain/lie_geometry.hpp"

namespace spinchain {

// Gradients of H are only taken where H exceeds this cutoff.
inline constexpr double kHCutoff = 1e-8;

struct SpinTriple {
    UnitVec3 x;
    UnitVec3 y;
    UnitVec3 z;

    SpinTriple(const UnitVec3& x_, const UnitVec3& y_, const UnitVec3& z_) : x(x_), y(y_), z(z_) {}

    // Normalizes each block of three; throws DomainError on zero blocks.
    static SpinTriple from_flat(std::span<const double, 9> flat);
    std::array<double, 9> flat() const;

    const UnitVec3& operator[](int k) const { return k == 0 ? x : (k == 1 ? y : z); }
    Vec3 sum() const { return x.vec() + y.vec() + z.vec(); }

    friend bool operator==(const SpinTriple&, const SpinTriple&) = default;
};

// Euclidean distance in R^9.
double distance(const SpinTriple& a, const SpinTriple& b);

// Tangent vectors u at x, v at y, w at z.
struct TangentTriple {
    Vec3 u;
    Vec3 v;
    Vec3 w;

    const Vec3& operator[](int k) const { return k == 0 ? u : (k == 1 ? v : w); }
    double norm() const { return std::sqrt(u.norm2() + v.norm2() + w.norm2()); }
    std::array<double, 9> flat() const { return {u.x, u.y, u.z, v.x, v.y, v.z, w.x, w.y, w.z}; }
};

// A point (h, i, j) of the base. Values returned by moment() satisfy
// 0 <= h <= 3 and |i| <= h; arbitrary triples are allowed as query points.
struct MomentValue {
    double h = 0.0;
    double i = 0.0;
    double j = 0.0;

    friend bool operator==(const MomentValue&, const MomentValue&) = default;
};

double distance(const MomentValue& a, const MomentValue& b);

double h_value(const SpinTriple& p);
double i_value(const SpinTriple& p, const UnitVec3& axis = kE3);
double j_value(const SpinTriple& p);
MomentValue moment(const SpinTriple& p);

// K = <X,Y> + <Y,Z> + <Z,X> = (H^2 - 3) / 2, smooth everywhere.
double pair_sum(const SpinTriple& p);

// X_H = (1/H)([Y+Z, X], [X+Z, Y], [X+Y, Z]); SingularPointError when H <= eps_h.
TangentTriple x_h(const SpinTriple& p, double eps_h = kHCutoff);
// X_{I_v} = ([v, X], [v, Y], [v, Z]).
TangentTriple x_i(const SpinTriple& p, const UnitVec3& axis = kE3);
// X_J = ([[Y,Z], X], [[Z,X], Y], [[X,Y], Z]).
TangentTriple x_j(const SpinTriple& p);

// One of H, I_v or J.
struct Observable {
    enum class Kind { H, I, J };
    Kind kind = Kind::H;
    UnitVec3 axis = kE3;

    static Observable H() { return {Kind::H, kE3}; }
    static Observable I(const UnitVec3& axis = kE3) { return {Kind::I, axis}; }
    static Observable J() { return {Kind::J, kE3}; }
};

double value(const Observable& f, const SpinTriple& p);
TangentTriple vector_field(const Observable& f, const SpinTriple& p, double eps_h = kHCutoff);

// {f, g}(p) = sum over the three factors of omega(X_f, X_g), from the analytic fields.
double poisson_bracket(const Observable& f, const Observable& g, const SpinTriple& p,
                       double eps_h = kHCutoff);

// Cyclic relabeling (X, Y, Z) -> (Z, X, Y).
SpinTriple cyclic_shift(const SpinTriple& p);
// (X, Y, Z) -> (-X, -Y, -Z).
SpinTriple negate(const SpinTriple& p);

class SpinChain {
public:
    explicit SpinChain(std::vector<UnitVec3> spins);

    std::size_t size() const noexcept { return spins_.size(); }
    const UnitVec3& operator[](std::size_t k) const { return spins_[k]; }
    const std::vector<UnitVec3>& spins() const noexcept { return spins_; }
    // Index taken modulo N.
    const UnitVec3& cyclic(std::ptrdiff_t k) const;

private:
    std::vector<UnitVec3> spins_;
};

// Complete-graph coupling: sum over ordered pairs i != j of <X_i, X_j>.
double chain_h(const SpinChain& c);
// sum_i <X_i, [X_{i+1}, X_{i+2}]>, indices mod N.
double chain_j(const SpinChain& c);
// sum_i <X_i, v>.
double chain_i(const SpinChain& c, const UnitVec3& v);
// Nearest-neighbour coupling sum_i <X_i, X_{i+1}>.
double chain_k(const SpinChain& c);

struct ChainObservable {
    enum class Kind { H, I, J };
    Kind kind = Kind::H;
    UnitVec3 axis = kE3;

    static ChainObservable H() { return {Kind::H, kE3}; }
    static ChainObservable I(const UnitVec3& axis = kE3) { return {Kind::I, axis}; }
    static ChainObservable J() { return {Kind::J, kE3}; }
};

double chain_value(const ChainObservable& f, const SpinChain& c);
// Ambient gradient d f / d X_k for every k (the normal part does not affect brackets).
std::vector<Vec3> chain_gradient(const ChainObservable& f, const SpinChain& c);
// sum_k <X_k, grad_k f x grad_k g>.
double chain_poisson_bracket(const ChainObservable& f, const ChainObservable& g, const SpinChain& c);

}  // namespace spinchain

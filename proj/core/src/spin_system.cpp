#include "spinchain/spin_system.hpp"

#include <sstream>

#include "spinchain/errors.hpp"

namespace spinchain {

SpinTriple SpinTriple::from_flat(std::span<const double, 9> f) {
    return {UnitVec3::normalized({f[0], f[1], f[2]}), UnitVec3::normalized({f[3], f[4], f[5]}),
            UnitVec3::normalized({f[6], f[7], f[8]})};
}

std::array<double, 9> SpinTriple::flat() const {
    return {x.x(), x.y(), x.z(), y.x(), y.y(), y.z(), z.x(), z.y(), z.z()};
}

double distance(const SpinTriple& a, const SpinTriple& b) {
    return std::sqrt((a.x.vec() - b.x.vec()).norm2() + (a.y.vec() - b.y.vec()).norm2() +
                     (a.z.vec() - b.z.vec()).norm2());
}

double distance(const MomentValue& a, const MomentValue& b) {
    return std::sqrt((a.h - b.h) * (a.h - b.h) + (a.i - b.i) * (a.i - b.i) + (a.j - b.j) * (a.j - b.j));
}

double h_value(const SpinTriple& p) { return p.sum().norm(); }

double i_value(const SpinTriple& p, const UnitVec3& axis) { return dot(p.sum(), axis); }

double j_value(const SpinTriple& p) { return det3(p.x, p.y, p.z); }

MomentValue moment(const SpinTriple& p) { return {h_value(p), i_value(p), j_value(p)}; }

double pair_sum(const SpinTriple& p) { return dot(p.x, p.y) + dot(p.y, p.z) + dot(p.z, p.x); }

TangentTriple x_h(const SpinTriple& p, double eps_h) {
    const Vec3 s = p.sum();
    const double h = s.norm();
    if (!(h > eps_h)) {
        std::ostringstream msg;
        msg << "x_h: H = " << h << " is below the smoothness cutoff " << eps_h;
        throw SingularPointError(msg.str(), h);
    }
    // [Y+Z, X] = [S, X] since [X, X] = 0.
    const Vec3 v = s / h;
    return {cross(v, p.x), cross(v, p.y), cross(v, p.z)};
}

TangentTriple x_i(const SpinTriple& p, const UnitVec3& axis) {
    return {cross(axis, p.x), cross(axis, p.y), cross(axis, p.z)};
}

TangentTriple x_j(const SpinTriple& p) {
    return {cross(cross(p.y, p.z), p.x), cross(cross(p.z, p.x), p.y), cross(cross(p.x, p.y), p.z)};
}

double value(const Observable& f, const SpinTriple& p) {
    switch (f.kind) {
        case Observable::Kind::H: return h_value(p);
        case Observable::Kind::I: return i_value(p, f.axis);
        case Observable::Kind::J: return j_value(p);
    }
    return 0.0;
}

TangentTriple vector_field(const Observable& f, const SpinTriple& p, double eps_h) {
    switch (f.kind) {
        case Observable::Kind::H: return x_h(p, eps_h);
        case Observable::Kind::I: return x_i(p, f.axis);
        case Observable::Kind::J: return x_j(p);
    }
    return {};
}

double poisson_bracket(const Observable& f, const Observable& g, const SpinTriple& p, double eps_h) {
    const TangentTriple a = vector_field(f, p, eps_h);
    const TangentTriple b = vector_field(g, p, eps_h);
    double sum = 0.0;
    for (int k = 0; k < 3; ++k) {
        sum += symplectic_form(p[k], a[k], b[k]);
    }
    return sum;
}

SpinTriple cyclic_shift(const SpinTriple& p) { return {p.z, p.x, p.y}; }

SpinTriple negate(const SpinTriple& p) { return {-p.x, -p.y, -p.z}; }

SpinChain::SpinChain(std::vector<UnitVec3> spins) : spins_(std::move(spins)) {
    if (spins_.size() < 3) {
        throw DomainError("SpinChain: at least three spins are required");
    }
}

const UnitVec3& SpinChain::cyclic(std::ptrdiff_t k) const {
    const auto n = static_cast<std::ptrdiff_t>(spins_.size());
    return spins_[static_cast<std::size_t>(((k % n) + n) % n)];
}

double chain_h(const SpinChain& c) {
    // sum_{i != j} <X_i, X_j> = |sum X_i|^2 - N, but the pairwise sum avoids cancellation.
    double total = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        for (std::size_t j = i + 1; j < c.size(); ++j) {
            total += dot(c[i], c[j]);
        }
    }
    return 2.0 * total;
}

double chain_j(const SpinChain& c) {
    double total = 0.0;
    const auto n = static_cast<std::ptrdiff_t>(c.size());
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        total += det3(c.cyclic(i), c.cyclic(i + 1), c.cyclic(i + 2));
    }
    return total;
}

double chain_i(const SpinChain& c, const UnitVec3& v) {
    double total = 0.0;
    for (const auto& s : c.spins()) total += dot(s, v);
    return total;
}

double chain_k(const SpinChain& c) {
    double total = 0.0;
    const auto n = static_cast<std::ptrdiff_t>(c.size());
    for (std::ptrdiff_t i = 0; i < n; ++i) total += dot(c.cyclic(i), c.cyclic(i + 1));
    return total;
}

double chain_value(const ChainObservable& f, const SpinChain& c) {
    switch (f.kind) {
        case ChainObservable::Kind::H: return chain_h(c);
        case ChainObservable::Kind::I: return chain_i(c, f.axis);
        case ChainObservable::Kind::J: return chain_j(c);
    }
    return 0.0;
}

std::vector<Vec3> chain_gradient(const ChainObservable& f, const SpinChain& c) {
    const auto n = static_cast<std::ptrdiff_t>(c.size());
    std::vector<Vec3> grad(c.size());
    switch (f.kind) {
        case ChainObservable::Kind::H: {
            Vec3 s;
            for (const auto& x : c.spins()) s += x;
            for (std::size_t k = 0; k < c.size(); ++k) grad[k] = 2.0 * (s - c[k].vec());
            break;
        }
        case ChainObservable::Kind::I:
            for (auto& g : grad) g = f.axis.vec();
            break;
        case ChainObservable::Kind::J:
            // X_k appears in the terms starting at k, k-1 and k-2.
            for (std::ptrdiff_t k = 0; k < n; ++k) {
                grad[static_cast<std::size_t>(k)] = cross(c.cyclic(k + 1), c.cyclic(k + 2)) +
                                                    cross(c.cyclic(k + 1), c.cyclic(k - 1)) +
                                                    cross(c.cyclic(k - 2), c.cyclic(k - 1));
            }
            break;
    }
    return grad;
}

double chain_poisson_bracket(const ChainObservable& f, const ChainObservable& g, const SpinChain& c) {
    const auto gf = chain_gradient(f, c);
    const auto gg = chain_gradient(g, c);
    double total = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) total += dot(c[k], cross(gf[k], gg[k]));
    return total;
}

}  // namespace spinchain

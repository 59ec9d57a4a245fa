#include "spinchain/monodromy.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "spinchain/moment_map.hpp"
#include "spinchain/sampling.hpp"

namespace spinchain {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kFiberTolerance = 1e-10;
constexpr int kRestarts = 50;

Eigen::Vector3d moment_residual(const SpinTriple& p, const MomentValue& b) {
    const MomentValue m = moment(p);
    return {m.h - b.h, m.i - b.i, m.j - b.j};
}

// Rows: tangent projections of grad H, grad I, grad J.
Eigen::Matrix<double, 3, 9> moment_jacobian(const SpinTriple& p) {
    const Vec3 s = p.sum();
    const double h = s.norm();
    const std::array<Vec3, 3> gj{cross(p.y, p.z), cross(p.z, p.x), cross(p.x, p.y)};
    Eigen::Matrix<double, 3, 9> jac;
    for (int k = 0; k < 3; ++k) {
        const Vec3& x = p[k];
        const std::array<Vec3, 3> rows{project_tangent(x, s / h), project_tangent(x, e3),
                                       project_tangent(x, gj[static_cast<std::size_t>(k)])};
        for (int r = 0; r < 3; ++r) {
            const Vec3& g = rows[static_cast<std::size_t>(r)];
            jac(r, 3 * k) = g.x;
            jac(r, 3 * k + 1) = g.y;
            jac(r, 3 * k + 2) = g.z;
        }
    }
    return jac;
}

SpinTriple displace(const SpinTriple& p, const Eigen::Matrix<double, 9, 1>& d) {
    auto move = [&](const UnitVec3& x, int k) {
        return UnitVec3::normalized(x.vec() + Vec3{d(3 * k), d(3 * k + 1), d(3 * k + 2)});
    };
    return {move(p.x, 0), move(p.y, 1), move(p.z, 2)};
}

// Minimum-norm Gauss-Newton with backtracking, retracting onto the spheres by
// normalization.
std::optional<SpinTriple> newton_on_fiber(SpinTriple p, const MomentValue& b) {
    double res = moment_residual(p, b).norm();
    for (int it = 0; it < 60; ++it) {
        if (res < 1e-14) break;
        if (h_value(p) <= kHCutoff) return std::nullopt;
        const auto jac = moment_jacobian(p);
        const Eigen::Matrix<double, 9, 1> step =
            jac.completeOrthogonalDecomposition().solve(-moment_residual(p, b));
        double lambda = 1.0;
        bool improved = false;
        for (int ls = 0; ls < 12; ++ls) {
            const SpinTriple trial = displace(p, lambda * step);
            const double r = moment_residual(trial, b).norm();
            if (r < res) {
                p = trial;
                res = r;
                improved = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!improved) break;
    }
    if (!(res < kFiberTolerance) || rank(p) != 3) return std::nullopt;
    return p;
}

void require_regular_value(const MomentValue& b, const char* who) {
    const bool finite = std::isfinite(b.h) && std::isfinite(b.i) && std::isfinite(b.j);
    if (!finite || !in_image(b, 0.0)) {
        std::ostringstream msg;
        msg << who << ": (" << b.h << ", " << b.i << ", " << b.j << ") is not in the moment image";
        throw NotInImageError(msg.str());
    }
    if (boundary_distance(b) <= kRegularMargin || critical_line_distance(b) <= kRegularMargin) {
        std::ostringstream msg;
        msg << who << ": (" << b.h << ", " << b.i << ", " << b.j
            << ") is within the regularity margin of the boundary or the critical line";
        throw NotInImageError(msg.str());
    }
}

double distance(const FlowTimes& a, const FlowTimes& b) { return (a - b).norm(); }

// Raw first-return triple shifted by multiples of e_h and e_i to sit nearest to ref.
FlowTimes nearest_representative(const FlowTimes& raw, const FlowTimes& ref) {
    FlowTimes v = raw;
    v.t_h += kTwoPi * std::round((ref.t_h - raw.t_h) / kTwoPi);
    v.t_i += kTwoPi * std::round((ref.t_i - raw.t_i) / kTwoPi);
    return v;
}

MomentValue lerp(const MomentValue& a, const MomentValue& b, double f) {
    return {a.h + f * (b.h - a.h), a.i + f * (b.i - a.i), a.j + f * (b.j - a.j)};
}

}  // namespace

SpinTriple find_fiber_point(const MomentValue& b, std::uint64_t seed, const std::optional<SpinTriple>& warm) {
    require_regular_value(b, "find_fiber_point");
    if (warm) {
        if (auto p = newton_on_fiber(*warm, b)) return *p;
    }
    for (int attempt = 0; attempt < kRestarts; ++attempt) {
        CounterRng rng(seed, static_cast<std::uint64_t>(attempt));
        if (auto p = newton_on_fiber(random_triple(rng), b)) return *p;
    }
    std::ostringstream msg;
    msg << "find_fiber_point: no convergence after " << kRestarts << " restarts";
    throw ConvergenceError(msg.str());
}

LatticeBasis period_lattice(const MomentValue& b, const IntegratorConfig& cfg, std::uint64_t seed,
                            const std::optional<SpinTriple>& warm) {
    const SpinTriple p = find_fiber_point(b, seed, warm);
    if (distance(flow_h(p, kTwoPi), p) > 1e-10 || distance(flow_i(p, kTwoPi), p) > 1e-10) {
        throw ConvergenceError("period_lattice: H or I flow failed to close at 2pi");
    }
    const FirstReturn fr = first_return(p, cfg);
    LatticeBasis basis{.v = fr.as_flow_times(), .point = p, .residual = fr.residual};
    return basis;
}

std::vector<MomentValue> default_loop(double rho, double s, std::size_t k, double center) {
    if (k < 8) throw ParameterError("default_loop: at least 8 loop points are required");
    if (!(rho > 0.0) || !std::isfinite(rho) || !std::isfinite(s) || !std::isfinite(center)) {
        throw ParameterError("default_loop: rho must be positive and all parameters finite");
    }
    std::vector<MomentValue> loop;
    loop.reserve(k);
    for (std::size_t n = 0; n < k; ++n) {
        const double a = kTwoPi * static_cast<double>(n) / static_cast<double>(k);
        const MomentValue b{center + rho * std::cos(a), s, rho * std::sin(a)};
        const bool inside = b.h >= 0.0 && b.h <= 3.0 && in_image(b, 0.0);
        if (!inside || boundary_distance(b) <= kRegularMargin ||
            critical_line_distance(b) <= kRegularMargin) {
            std::ostringstream msg;
            msg << "default_loop: point " << n << " = (" << b.h << ", " << b.i << ", " << b.j
                << ") leaves the regular region";
            throw ParameterError(msg.str());
        }
        loop.push_back(b);
    }
    return loop;
}

IntMatrix3 unipotent_matrix(int m1, int m2) { return {{{1, 0, m1}, {0, 1, m2}, {0, 0, 1}}}; }

MonodromyResult continue_lattice(const std::vector<MomentValue>& loop, const IntegratorConfig& cfg,
                                 std::uint64_t seed) {
    if (loop.size() < 8) throw ParameterError("continue_lattice: at least 8 loop points are required");
    for (const auto& b : loop) require_regular_value(b, "continue_lattice");

    MonodromyResult result;
    result.loop = loop;

    const LatticeBasis start = period_lattice(loop.front(), cfg, seed);
    const FlowTimes v0 = start.v;
    FlowTimes v_prev = v0;
    SpinTriple p_prev = start.point;
    result.steps.push_back({loop.front(), v0});

    const std::size_t k_loop = loop.size();
    const std::size_t max_factor = std::max<std::size_t>(1, kMaxLoopPoints / k_loop);

    for (std::size_t k = 1; k <= k_loop; ++k) {
        const MomentValue& from = loop[k - 1];
        const MomentValue& to = loop[k % k_loop];
        bool done = false;
        for (std::size_t factor = 1; factor <= max_factor && !done; factor *= 2) {
            std::vector<ContinuationStep> segment;
            FlowTimes v = v_prev;
            SpinTriple p = p_prev;
            bool ok = true;
            for (std::size_t j = 1; j <= factor; ++j) {
                const MomentValue b =
                    j == factor ? to : lerp(from, to, static_cast<double>(j) / static_cast<double>(factor));
                const LatticeBasis lb = period_lattice(b, cfg, seed, p);
                const FlowTimes next = nearest_representative(lb.v, v);
                if (distance(next, v) > std::numbers::pi) {
                    ok = false;
                    break;
                }
                v = next;
                p = lb.point;
                segment.push_back({b, v});
            }
            if (ok) {
                result.steps.insert(result.steps.end(), segment.begin(), segment.end());
                v_prev = v;
                p_prev = p;
                done = true;
            }
        }
        if (!done) {
            std::ostringstream msg;
            msg << "continue_lattice: jump above pi between loop points " << k - 1 << " and "
                << k % k_loop << " even after subdivision; use more loop points";
            throw ContinuationError(msg.str(), result);
        }
    }

    const double dh = (v_prev.t_h - v0.t_h) / kTwoPi;
    const double di = (v_prev.t_i - v0.t_i) / kTwoPi;
    result.m1 = static_cast<int>(std::lround(dh));
    result.m2 = static_cast<int>(std::lround(di));
    result.residual = std::max(std::abs(dh - result.m1), std::abs(di - result.m2));
    result.period_mismatch = std::abs(v_prev.t_j - v0.t_j);
    result.matrix = unipotent_matrix(result.m1, result.m2);
    if (!(result.residual < kQuantizationTolerance)) {
        std::ostringstream msg;
        msg << "continue_lattice: offsets not quantized (residual " << result.residual << ")";
        throw InconclusiveError(msg.str(), result);
    }
    return result;
}

}  // namespace spinchain

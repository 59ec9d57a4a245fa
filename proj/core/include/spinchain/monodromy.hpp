#pragma once

// Period lattices of regular fibers and their continuation around a loop of
// regular values.

#include <array>
#include <cstdint>
#include <numbers>
#include <optional>
#include <vector>

#include "spinchain/errors.hpp"
#include "spinchain/flows.hpp"
#include "spinchain/spin_system.hpp"

namespace spinchain {

// Regular values closer than this to the image boundary or to the critical line are rejected.
inline constexpr double kRegularMargin = 1e-3;

// Point of the fiber over b with |moment(p) - b| < 1e-10 and rank 3. A warm start is
// tried first; otherwise up to 50 random restarts drawn from seed. NotInImageError
// when b is outside the margin-shrunk regular region, ConvergenceError when every
// restart fails.
SpinTriple find_fiber_point(const MomentValue& b, std::uint64_t seed,
                            const std::optional<SpinTriple>& warm = std::nullopt);

// Generators of the period lattice in flow-time coordinates (t_h, t_i, t_j).
struct LatticeBasis {
    FlowTimes e_h{2.0 * std::numbers::pi, 0.0, 0.0};
    FlowTimes e_i{0.0, 2.0 * std::numbers::pi, 0.0};
    FlowTimes v;       // first-return generator, t_j > 0
    SpinTriple point;  // fiber point the lattice was computed at
    double residual;   // closure residual of v at point
};

LatticeBasis period_lattice(const MomentValue& b, const IntegratorConfig& cfg, std::uint64_t seed,
                            const std::optional<SpinTriple>& warm = std::nullopt);

// K points (center + rho cos, s, rho sin) traversed counterclockwise in the (h, j)
// plane. ParameterError when K < 8 or any point is within kRegularMargin of the
// boundary or of the critical line.
std::vector<MomentValue> default_loop(double rho = 0.3, double s = 0.0, std::size_t k = 48,
                                      double center = 1.0);

struct ContinuationStep {
    MomentValue value;
    FlowTimes v;  // tracked representative
};

using IntMatrix3 = std::array<std::array<int, 3>, 3>;

struct MonodromyResult {
    IntMatrix3 matrix{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    int m1 = 0;
    int m2 = 0;
    double residual = 0.0;         // max distance of the two offsets from integers
    double period_mismatch = 0.0;  // |T_end - T_start|, a consistency diagnostic
    std::vector<MomentValue> loop;
    std::vector<ContinuationStep> steps;  // includes any subdivision points; last is back at loop[0]
};

// Continuation step too coarse even after subdivision.
class ContinuationError : public Error {
public:
    ContinuationError(const std::string& what, MonodromyResult partial)
        : Error(what), partial_(std::move(partial)) {}
    const MonodromyResult& partial() const noexcept { return partial_; }

private:
    MonodromyResult partial_;
};

// The offsets after the loop are not close enough to integers.
class InconclusiveError : public Error {
public:
    InconclusiveError(const std::string& what, MonodromyResult result)
        : Error(what), result_(std::move(result)) {}
    const MonodromyResult& result() const noexcept { return result_; }

private:
    MonodromyResult result_;
};

inline constexpr double kQuantizationTolerance = 0.05;
inline constexpr std::size_t kMaxLoopPoints = 384;

// Tracks v by nearest representative modulo (e_h, e_i) along the closed loop
// loop[0], ..., loop[K-1], loop[0]. A segment whose jump exceeds pi is subdivided
// by 2, 4, 8, ... while the equivalent loop size stays within kMaxLoopPoints.
MonodromyResult continue_lattice(const std::vector<MomentValue>& loop, const IntegratorConfig& cfg,
                                 std::uint64_t seed);

IntMatrix3 unipotent_matrix(int m1, int m2);

}  // namespace spinchain

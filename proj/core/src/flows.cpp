#include "spinchain/flows.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <boost/numeric/odeint/stepper/runge_kutta_fehlberg78.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "spinchain/errors.hpp"
#include "spinchain/moment_map.hpp"

namespace spinchain {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

using State = std::array<double, 9>;

double wrap_angle(double a) {
    double w = a - kTwoPi * std::floor(a / kTwoPi);
    if (w >= kTwoPi - 1e-9) w = 0.0;
    return w;
}

void j_field(const State& s, State& ds, double /*t*/) {
    const Vec3 x{s[0], s[1], s[2]};
    const Vec3 y{s[3], s[4], s[5]};
    const Vec3 z{s[6], s[7], s[8]};
    const Vec3 a = cross(cross(y, z), x);
    const Vec3 b = cross(cross(z, x), y);
    const Vec3 c = cross(cross(x, y), z);
    ds = {a.x, a.y, a.z, b.x, b.y, b.z, c.x, c.y, c.z};
}

void renormalize(State& s) {
    for (int k = 0; k < 9; k += 3) {
        const double n = std::sqrt(s[k] * s[k] + s[k + 1] * s[k + 1] + s[k + 2] * s[k + 2]);
        s[k] /= n;
        s[k + 1] /= n;
        s[k + 2] /= n;
    }
}

SpinTriple to_triple(const State& s) { return SpinTriple::from_flat(s); }

// Fehlberg 7(8) with error-per-unit-step control, so the accumulated error over a
// span of length T stays near tol * T.
class JIntegrator {
public:
    JIntegrator(const State& start, const IntegratorConfig& cfg)
        : x_(start), cfg_(cfg), h_(std::min(cfg.step, cfg.max_step)) {}

    double time() const { return t_; }
    const State& state() const { return x_; }

    // One accepted step of at most |limit| in the direction of limit.
    void step(double limit) {
        const double dir = limit < 0.0 ? -1.0 : 1.0;
        for (;;) {
            const double h = dir * std::min({h_, std::abs(limit), cfg_.max_step});
            State trial = x_;
            State err{};
            stepper_.do_step(j_field, trial, t_, h, err);
            double e = 0.0;
            for (double v : err) e = std::max(e, std::abs(v));
            const double scaled = e / (cfg_.tol * std::abs(h));
            if (scaled <= 1.0) {
                renormalize(trial);
                x_ = trial;
                t_ += h;
                const double grow = scaled > 0.0 ? 0.9 * std::pow(scaled, -1.0 / 7.0) : 5.0;
                h_ = std::abs(h) * std::clamp(grow, 1.0, 5.0);
                return;
            }
            h_ = std::abs(h) * std::clamp(0.9 * std::pow(scaled, -1.0 / 7.0), 0.1, 0.9);
            if (h_ < 1e-13 * std::max(1.0, std::abs(t_))) {
                std::ostringstream msg;
                msg << "flow_j: step size underflow at t = " << t_;
                throw IntegrationError(msg.str(), t_);
            }
        }
    }

    void advance(double duration) {
        const double target = t_ + duration;
        while (std::abs(target - t_) > 0.0) {
            const double remaining = target - t_;
            if (std::abs(remaining) <= 1e-15 * std::max(1.0, std::abs(target))) break;
            step(remaining);
        }
    }

private:
    State x_;
    IntegratorConfig cfg_;
    double h_;
    double t_ = 0.0;
    boost::numeric::odeint::runge_kutta_fehlberg78<State> stepper_;
};

Eigen::Matrix<double, 9, 1> as_vector(const std::array<double, 9>& a) {
    Eigen::Matrix<double, 9, 1> v;
    for (int k = 0; k < 9; ++k) v(k) = a[static_cast<std::size_t>(k)];
    return v;
}

Eigen::Matrix<double, 9, 1> difference(const SpinTriple& a, const SpinTriple& b) {
    return as_vector(a.flat()) - as_vector(b.flat());
}

SpinTriple torus_action(const SpinTriple& q, double alpha, double beta) {
    return flow_h(flow_i(q, beta), alpha);
}

}  // namespace

double FlowTimes::norm() const { return std::sqrt(t_h * t_h + t_i * t_i + t_j * t_j); }

void IntegratorConfig::validate() const {
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!positive(step) || !positive(tol) || !positive(max_time) || !positive(max_step)) {
        throw ParameterError("IntegratorConfig: step, tol, max_time and max_step must be positive");
    }
}

SpinTriple flow_i(const SpinTriple& p, double t) {
    return {rotate(p.x, e3, t), rotate(p.y, e3, t), rotate(p.z, e3, t)};
}

SpinTriple flow_h(const SpinTriple& p, double t, double eps_h) {
    const Vec3 s = p.sum();
    const double h = s.norm();
    if (!(h > eps_h)) {
        std::ostringstream msg;
        msg << "flow_h: H = " << h << " is below the smoothness cutoff " << eps_h;
        throw SingularPointError(msg.str(), h);
    }
    const Vec3 axis = s / h;
    return {rotate(p.x, axis, t), rotate(p.y, axis, t), rotate(p.z, axis, t)};
}

SpinTriple flow_j(const SpinTriple& p, double t, const IntegratorConfig& cfg) {
    cfg.validate();
    if (t == 0.0) return p;
    JIntegrator integ(p.flat(), cfg);
    integ.advance(t);
    return to_triple(integ.state());
}

SpinTriple flow_combo(const SpinTriple& p, const FlowTimes& tau, const IntegratorConfig& cfg) {
    return flow_h(flow_i(flow_j(p, tau.t_j, cfg), tau.t_i), tau.t_h);
}

OrbitDistance torus_orbit_distance(const SpinTriple& q, const SpinTriple& p) {
    constexpr int kGrid = 16;
    OrbitDistance best{std::numeric_limits<double>::infinity(), 0.0, 0.0};
    for (int a = 0; a < kGrid; ++a) {
        for (int b = 0; b < kGrid; ++b) {
            const double alpha = kTwoPi * a / kGrid;
            const double beta = kTwoPi * b / kGrid;
            const double d = distance(torus_action(q, alpha, beta), p);
            if (d < best.distance) best = {d, alpha, beta};
        }
    }
    // Gauss-Newton on the 9-vector residual; columns are X_H and X_I at the image point.
    for (int it = 0; it < 12; ++it) {
        const SpinTriple w = torus_action(q, best.alpha, best.beta);
        const auto r = difference(w, p);
        Eigen::Matrix<double, 9, 2> jac;
        jac.col(0) = as_vector(x_h(w).flat());
        jac.col(1) = as_vector(x_i(w).flat());
        const Eigen::Vector2d delta = jac.colPivHouseholderQr().solve(-r);
        const double alpha = best.alpha + delta(0);
        const double beta = best.beta + delta(1);
        const double d = distance(torus_action(q, alpha, beta), p);
        if (!(d < best.distance)) break;
        const bool tiny = delta.norm() < 1e-14;
        best = {d, alpha, beta};
        if (tiny) break;
    }
    best.alpha = wrap_angle(best.alpha);
    best.beta = wrap_angle(best.beta);
    return best;
}

namespace {

struct Sample {
    double t;
    State state;
    OrbitDistance orbit;
};

// 3D Gauss-Newton in (t, alpha, beta) on flow_h(flow_i(flow_j(p, t), beta), alpha) - p,
// starting from the stored sample. Commuting flows make the Jacobian columns the three
// vector fields at the image point.
FirstReturn polish(const SpinTriple& p, const Sample& start, const IntegratorConfig& cfg) {
    const SpinTriple anchor = to_triple(start.state);
    double tau = 0.0;
    double alpha = start.orbit.alpha;
    double beta = start.orbit.beta;

    auto image = [&](double dt, double a, double b) {
        SpinTriple q = anchor;
        if (dt != 0.0) {
            JIntegrator integ(start.state, cfg);
            integ.advance(dt);
            q = to_triple(integ.state());
        }
        return torus_action(q, a, b);
    };

    SpinTriple w = image(tau, alpha, beta);
    double res = distance(w, p);
    for (int it = 0; it < 40 && res > 1e-14; ++it) {
        Eigen::Matrix<double, 9, 3> jac;
        jac.col(0) = as_vector(x_j(w).flat());
        jac.col(1) = as_vector(x_h(w).flat());
        jac.col(2) = as_vector(x_i(w).flat());
        const Eigen::Vector3d delta = jac.colPivHouseholderQr().solve(-difference(w, p));
        double lambda = 1.0;
        bool improved = false;
        for (int ls = 0; ls < 8; ++ls) {
            const SpinTriple trial = image(tau + lambda * delta(0), alpha + lambda * delta(1),
                                           beta + lambda * delta(2));
            const double tr = distance(trial, p);
            if (tr < res) {
                tau += lambda * delta(0);
                alpha += lambda * delta(1);
                beta += lambda * delta(2);
                w = trial;
                res = tr;
                improved = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!improved || delta.norm() < 1e-15) break;
    }
    return {wrap_angle(alpha), wrap_angle(beta), start.t + tau, res};
}

}  // namespace

FirstReturn first_return(const SpinTriple& p, const IntegratorConfig& cfg) {
    cfg.validate();
    if (!(h_value(p) > kHCutoff)) {
        throw SingularPointError("first_return: H is at the singular level", h_value(p));
    }
    if (rank(p) != 3) {
        throw DomainError("first_return: the point is not regular (rank < 3)");
    }

    constexpr double kArm = 0.1;
    JIntegrator integ(p.flat(), cfg);
    std::array<Sample, 3> window{};
    int filled = 0;
    bool armed = false;

    while (integ.time() < cfg.max_time) {
        integ.step(cfg.max_time - integ.time());
        const Sample s{integ.time(), integ.state(), torus_orbit_distance(to_triple(integ.state()), p)};
        window[0] = window[1];
        window[1] = window[2];
        window[2] = s;
        filled = std::min(filled + 1, 3);
        if (!armed) {
            armed = s.orbit.distance > kArm;
            continue;
        }
        if (filled < 3) continue;
        const Sample& mid = window[1];
        if (mid.orbit.distance < kArm && mid.orbit.distance <= window[0].orbit.distance &&
            mid.orbit.distance <= window[2].orbit.distance) {
            const FirstReturn fr = polish(p, mid, cfg);
            if (fr.residual < kReturnResidual && fr.period > 0.0) return fr;
            if (fr.residual < 1e-4) {
                std::ostringstream msg;
                msg << "first_return: return near T = " << fr.period
                    << " did not polish below " << kReturnResidual << " (residual " << fr.residual << ")";
                throw RefinementError(msg.str(), fr.residual);
            }
            // A near miss of the torus orbit; keep scanning.
        }
    }
    std::ostringstream msg;
    msg << "first_return: no return to the torus orbit before t = " << cfg.max_time;
    throw SearchError(msg.str());
}

}  // namespace spinchain

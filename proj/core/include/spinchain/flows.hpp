#pragma once

// Hamiltonian flows of H, I and J. The flows of H and I are rotations and are
// evaluated in closed form; the flow of J is integrated numerically.

#include <vector>

#include "spinchain/spin_system.hpp"

namespace spinchain {

// Flow durations along (X_H, X_I, X_J); also the coordinates of period-lattice
// elements in the frame (dH, dI, dJ).
struct FlowTimes {
    double t_h = 0.0;
    double t_i = 0.0;
    double t_j = 0.0;

    friend constexpr FlowTimes operator+(const FlowTimes& a, const FlowTimes& b) {
        return {a.t_h + b.t_h, a.t_i + b.t_i, a.t_j + b.t_j};
    }
    friend constexpr FlowTimes operator-(const FlowTimes& a, const FlowTimes& b) {
        return {a.t_h - b.t_h, a.t_i - b.t_i, a.t_j - b.t_j};
    }
    friend constexpr FlowTimes operator*(double s, const FlowTimes& a) {
        return {s * a.t_h, s * a.t_i, s * a.t_j};
    }
    double norm() const;
};

struct IntegratorConfig {
    double step = 1e-3;      // initial step
    double tol = 1e-10;      // local error allowed per unit of integration time
    double max_time = 1e3;   // return-search horizon
    double max_step = 0.05;  // also the sampling resolution of return detection

    // Throws ParameterError unless every field is positive and finite.
    void validate() const;
};

SpinTriple flow_i(const SpinTriple& p, double t);
// Rotation of every spin about (X+Y+Z)/|X+Y+Z|; SingularPointError when H <= eps_h.
SpinTriple flow_h(const SpinTriple& p, double t, double eps_h = kHCutoff);
// Adaptive Fehlberg 7(8) integration of X_J with each spin renormalized after every
// accepted step. t may be negative. IntegrationError on step-size underflow.
SpinTriple flow_j(const SpinTriple& p, double t, const IntegratorConfig& cfg = {});
// flow_h(flow_i(flow_j(p, t_j), t_i), t_h).
SpinTriple flow_combo(const SpinTriple& p, const FlowTimes& tau, const IntegratorConfig& cfg = {});

struct FirstReturn {
    double alpha = 0.0;  // H-flow offset in [0, 2pi)
    double beta = 0.0;   // I-flow offset in [0, 2pi)
    double period = 0.0; // J-flow time T > 0
    double residual = 0.0;

    FlowTimes as_flow_times() const { return {alpha, beta, period}; }
};

inline constexpr double kReturnResidual = 1e-8;

// Smallest T > 0 with flow_h(flow_i(flow_j(p, T), beta), alpha) = p to 1e-8.
// Requires a regular point (rank 3). SearchError when nothing returns before
// cfg.max_time, RefinementError when a detected return cannot be polished.
FirstReturn first_return(const SpinTriple& p, const IntegratorConfig& cfg = {});

// Distance from q to the (H, I) torus orbit of p: min over (alpha, beta) of
// |flow_h(flow_i(q, beta), alpha) - p|, with the minimizing angles.
struct OrbitDistance {
    double distance;
    double alpha;
    double beta;
};
OrbitDistance torus_orbit_distance(const SpinTriple& q, const SpinTriple& p);

}  // namespace spinchain

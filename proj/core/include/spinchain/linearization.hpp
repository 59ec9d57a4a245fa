#pragma once

// Cylindrical Darboux chart, Hessians of the pulled-back integrals and the
// linearized flows at the focus-focus points over the critical line.
//
// Every 6-vector and 6x6 matrix here uses the coordinate order
// (z1, z2, z3, theta1, theta2, theta3). In this order the symplectic form
// sum dtheta_i ^ dz_i has Gram matrix [[0, -I], [I, 0]] and the linearization of
// X_f is that same matrix times the Hessian of f.

#include <Eigen/Core>
#include <array>
#include <complex>
#include <span>

#include "spinchain/spin_system.hpp"

namespace spinchain {

struct CylCoords {
    std::array<double, 3> theta{};  // each in (-pi/2, 3pi/2)
    std::array<double, 3> zed{};    // each in (-1, 1)

    // Throws DomainError when a coordinate leaves the chart.
    void validate() const;
};

SpinTriple from_cylindrical(const CylCoords& c);
// Inverse chart; DomainError at a pole or where the azimuth equals 3pi/2.
CylCoords to_cylindrical(const SpinTriple& p);

using Matrix6 = Eigen::Matrix<double, 6, 6>;

// Gram matrix of the chart's symplectic form.
Matrix6 chart_omega();

// Hat-H is |X + Y + Z|^2 and hat-J is det(X, Y, Z), written in the chart.
double h_hat(const CylCoords& c);
double j_hat(const CylCoords& c);

// Second derivatives assembled from closed-form partials; exactly symmetric.
Matrix6 hessian_h_hat(const CylCoords& c);
Matrix6 hessian_j_hat(const CylCoords& c);

struct LinOp6 {
    Matrix6 entries = Matrix6::Zero();

    // max |A^T Omega + Omega A|.
    double symplectic_defect() const;
    bool is_infinitesimally_symplectic(double tol = 1e-10) const { return symplectic_defect() <= tol; }
};

enum class HatFunction { HHat, JHat };

// Linearization of X_f at a zero of X_f. DomainError if |X_f(c)| >= 1e-8 or if the
// result fails the symplectic invariant.
LinOp6 linearization(HatFunction which, const CylCoords& c);

// The point (X, X, -X) with X = (sqrt(1 - s^2), 0, s): theta = (0, 0, pi), z = (s, s, -s).
CylCoords focus_focus_point(double s);

using Spectrum6 = std::array<std::complex<double>, 6>;

// Eigenvalues sorted by modulus, with the four largest then ordered by (re, im).
Spectrum6 spectrum(const Matrix6& m);

// Spectrum of A_Jhat + A_Hhat at focus_focus_point(s); DomainError unless |s| < 1.
Spectrum6 focus_focus_eigs(double s);

struct WilliamsonType {
    int h_e = 0;
    int h_h = 0;
    int h_f = 0;

    friend bool operator==(const WilliamsonType&, const WilliamsonType&) = default;
};

// Pattern match of an eigenvalue quadruple closed under negation and conjugation.
// DomainError when the quadruple is not closed within tol; DegenerateClassificationError
// when a component sits within tol of zero or two eigenvalues coincide.
WilliamsonType williamson_type(std::span<const std::complex<double>, 4> quad, double tol = 1e-6);

}  // namespace spinchain

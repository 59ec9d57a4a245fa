#include "spinchain/linearization.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "spinchain/errors.hpp"

namespace spinchain {

namespace {

constexpr double kPi = std::numbers::pi;

struct Chart {
    std::array<double, 3> t;  // theta
    std::array<double, 3> z;
    std::array<double, 3> r;  // sqrt(1 - z^2)
};

Chart unpack(const CylCoords& c) {
    c.validate();
    Chart ch{c.theta, c.zed, {}};
    for (int k = 0; k < 3; ++k) ch.r[k] = std::sqrt(1.0 - ch.z[k] * ch.z[k]);
    return ch;
}

constexpr int prev(int i) { return (i + 2) % 3; }
constexpr int next(int i) { return (i + 1) % 3; }

// Assemble [[F_zz, F_zt], [F_zt^T, F_tt]] from the three 3x3 blocks, with
// F_zt(i, k) = d^2 f / dz_i dtheta_k.
Matrix6 assemble(const Eigen::Matrix3d& zz, const Eigen::Matrix3d& zt, const Eigen::Matrix3d& tt) {
    Matrix6 m;
    m.topLeftCorner<3, 3>() = 0.5 * (zz + zz.transpose());
    m.topRightCorner<3, 3>() = zt;
    m.bottomLeftCorner<3, 3>() = zt.transpose();
    m.bottomRightCorner<3, 3>() = 0.5 * (tt + tt.transpose());
    return m;
}

double field_norm(HatFunction which, const SpinTriple& p) {
    if (which == HatFunction::JHat) return x_j(p).norm();
    // hat-H = |S|^2 has gradient 2S in every factor.
    const Vec3 s = 2.0 * p.sum();
    const TangentTriple f{cross(s, p.x), cross(s, p.y), cross(s, p.z)};
    return f.norm();
}

}  // namespace

void CylCoords::validate() const {
    for (int k = 0; k < 3; ++k) {
        const double t = theta[k];
        const double z = zed[k];
        if (!(t > -kPi / 2.0 && t < 1.5 * kPi) || !(z > -1.0 && z < 1.0)) {
            throw DomainError("CylCoords: coordinate outside (-pi/2, 3pi/2) x (-1, 1)");
        }
    }
}

SpinTriple from_cylindrical(const CylCoords& c) {
    c.validate();
    auto phi = [](double t, double z) {
        const double r = std::sqrt(1.0 - z * z);
        return UnitVec3::normalized({r * std::cos(t), r * std::sin(t), z});
    };
    return {phi(c.theta[0], c.zed[0]), phi(c.theta[1], c.zed[1]), phi(c.theta[2], c.zed[2])};
}

CylCoords to_cylindrical(const SpinTriple& p) {
    CylCoords c;
    for (int k = 0; k < 3; ++k) {
        const Vec3& v = p[k];
        if (std::hypot(v.x, v.y) == 0.0 || std::abs(v.z) >= 1.0) {
            throw DomainError("to_cylindrical: spin at a pole");
        }
        double t = std::atan2(v.y, v.x);
        if (t <= -kPi / 2.0) t += 2.0 * kPi;
        if (!(t < 1.5 * kPi)) throw DomainError("to_cylindrical: azimuth outside the chart");
        c.theta[k] = t;
        c.zed[k] = v.z;
    }
    c.validate();
    return c;
}

Matrix6 chart_omega() {
    Matrix6 w = Matrix6::Zero();
    w.topRightCorner<3, 3>() = -Eigen::Matrix3d::Identity();
    w.bottomLeftCorner<3, 3>() = Eigen::Matrix3d::Identity();
    return w;
}

double h_hat(const CylCoords& c) {
    const SpinTriple p = from_cylindrical(c);
    return p.sum().norm2();
}

double j_hat(const CylCoords& c) { return j_value(from_cylindrical(c)); }

Matrix6 hessian_h_hat(const CylCoords& c) {
    const Chart ch = unpack(c);
    const auto& [t, z, r] = ch;
    Eigen::Matrix3d zz, zt, tt;
    for (int i = 0; i < 3; ++i) {
        double cos_sum = 0.0;
        double sin_sum = 0.0;
        for (int j = 0; j < 3; ++j) {
            sin_sum += r[j] * std::sin(t[i] - t[j]);
            if (j != i) cos_sum += r[j] * std::cos(t[i] - t[j]);
        }
        for (int k = 0; k < 3; ++k) {
            if (k == i) {
                zz(i, k) = -2.0 * cos_sum / (r[i] * r[i] * r[i]);
                zt(i, k) = 2.0 * z[i] / r[i] * sin_sum;
                tt(i, k) = -2.0 * r[i] * cos_sum;
            } else {
                const double ck = std::cos(t[i] - t[k]);
                zz(i, k) = 2.0 * z[i] * z[k] / (r[i] * r[k]) * ck + 2.0;
                zt(i, k) = -2.0 * z[i] / r[i] * r[k] * std::sin(t[i] - t[k]);
                tt(i, k) = 2.0 * r[i] * r[k] * ck;
            }
        }
    }
    return assemble(zz, zt, tt);
}

Matrix6 hessian_j_hat(const CylCoords& c) {
    const Chart ch = unpack(c);
    const auto& [t, z, r] = ch;
    Eigen::Matrix3d zz, zt, tt;
    for (int i = 0; i < 3; ++i) {
        const int m = prev(i);
        const int n = next(i);
        const double s_ni = std::sin(t[n] - t[i]);
        const double s_im = std::sin(t[i] - t[m]);
        const double s_mn = std::sin(t[m] - t[n]);
        const double c_ni = std::cos(t[n] - t[i]);
        const double c_im = std::cos(t[i] - t[m]);
        const double c_mn = std::cos(t[m] - t[n]);

        zz(i, i) = -(z[m] * r[n] * s_ni + z[n] * r[m] * s_im) / (r[i] * r[i] * r[i]);
        zz(i, m) = -z[i] / r[i] * (r[n] * s_ni - z[n] * z[m] / r[m] * s_im) - z[m] * r[n] / r[m] * s_mn;
        zz(i, n) = -z[i] / r[i] * (-z[m] * z[n] / r[n] * s_ni + r[m] * s_im) - z[n] * r[m] / r[n] * s_mn;

        zt(i, i) = -z[i] / r[i] * (z[n] * r[m] * c_im - z[m] * r[n] * c_ni);
        zt(i, m) = z[i] * z[n] * r[m] / r[i] * c_im + r[n] * r[m] * c_mn;
        zt(i, n) = -z[i] * z[m] * r[n] / r[i] * c_ni - r[n] * r[m] * c_mn;

        tt(i, i) = r[i] * (-z[n] * r[m] * s_im - z[m] * r[n] * s_ni);
        tt(i, m) = z[n] * r[i] * r[m] * s_im;
        tt(i, n) = z[m] * r[i] * r[n] * s_ni;
    }
    return assemble(zz, zt, tt);
}

double LinOp6::symplectic_defect() const {
    const Matrix6 w = chart_omega();
    return (entries.transpose() * w + w * entries).cwiseAbs().maxCoeff();
}

LinOp6 linearization(HatFunction which, const CylCoords& c) {
    const SpinTriple p = from_cylindrical(c);
    if (!(field_norm(which, p) < 1e-8)) {
        throw DomainError("linearization: the point is not a zero of the vector field");
    }
    const Matrix6 hess = which == HatFunction::HHat ? hessian_h_hat(c) : hessian_j_hat(c);
    // X_f = (-df/dtheta) d/dz + (df/dz) d/dtheta, so A = [[0, -I], [I, 0]] * Hessian.
    LinOp6 op{chart_omega() * hess};
    if (!op.is_infinitesimally_symplectic()) {
        throw DomainError("linearization: result violates the symplectic invariant");
    }
    return op;
}

CylCoords focus_focus_point(double s) {
    if (!(std::abs(s) < 1.0)) throw DomainError("focus_focus_point: |s| must be below 1");
    return CylCoords{{0.0, 0.0, kPi}, {s, s, -s}};
}

Spectrum6 spectrum(const Matrix6& m) {
    const Eigen::EigenSolver<Matrix6> es(m, false);
    if (es.info() != Eigen::Success) throw ConvergenceError("spectrum: eigensolver failed");
    Spectrum6 out;
    for (int k = 0; k < 6; ++k) out[static_cast<std::size_t>(k)] = es.eigenvalues()(k);
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return std::abs(a) < std::abs(b); });
    std::sort(out.begin() + 2, out.end(), [](const auto& a, const auto& b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return out;
}

Spectrum6 focus_focus_eigs(double s) {
    const CylCoords c = focus_focus_point(s);
    const Matrix6 sum =
        linearization(HatFunction::JHat, c).entries + linearization(HatFunction::HHat, c).entries;
    return spectrum(sum);
}

WilliamsonType williamson_type(std::span<const std::complex<double>, 4> quad, double tol) {
    for (const auto& l : quad) {
        bool neg = false;
        bool conj = false;
        for (const auto& m : quad) {
            neg = neg || std::abs(m + l) <= tol;
            conj = conj || std::abs(m - std::conj(l)) <= tol;
        }
        if (!neg || !conj) {
            throw DomainError("williamson_type: eigenvalues not closed under negation and conjugation");
        }
    }
    for (std::size_t a = 0; a < 4; ++a) {
        for (std::size_t b = a + 1; b < 4; ++b) {
            if (std::abs(quad[a] - quad[b]) <= tol) {
                throw DegenerateClassificationError("williamson_type: repeated eigenvalue");
            }
        }
    }
    int elliptic = 0;
    int hyperbolic = 0;
    int focus = 0;
    for (const auto& l : quad) {
        const bool re = std::abs(l.real()) > tol;
        const bool im = std::abs(l.imag()) > tol;
        if (re && im) {
            ++focus;
        } else if (im) {
            ++elliptic;
        } else if (re) {
            ++hyperbolic;
        } else {
            throw DegenerateClassificationError("williamson_type: eigenvalue within tol of zero");
        }
    }
    if (focus != 0 && focus != 4) {
        throw DegenerateClassificationError("williamson_type: mixed focus-focus pattern");
    }
    return {elliptic / 2, hyperbolic / 2, focus / 4};
}

}  // namespace spinchain

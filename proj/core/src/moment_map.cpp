#include "spinchain/moment_map.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "spinchain/errors.hpp"
#include "spinchain/sampling.hpp"

namespace spinchain {

std::string_view to_string(CriticalTag tag) {
    switch (tag) {
        case CriticalTag::Regular: return "REGULAR";
        case CriticalTag::C1Face: return "C1_FACE";
        case CriticalTag::C2Face: return "C2_FACE";
        case CriticalTag::EdgeC1C2: return "EDGE_C1_C2";
        case CriticalTag::VertexSO3: return "VERTEX_SO3";
        case CriticalTag::SphereS1: return "SPHERE_S1";
        case CriticalTag::SphereS2: return "SPHERE_S2";
        case CriticalTag::SphereS3: return "SPHERE_S3";
        case CriticalTag::SphereS4: return "SPHERE_S4";
    }
    return "UNKNOWN";
}

std::string_view to_string(MeshFace face) {
    switch (face) {
        case MeshFace::SPlus: return "S_PLUS";
        case MeshFace::SMinus: return "S_MINUS";
        case MeshFace::TPlus: return "T_PLUS";
        case MeshFace::TMinus: return "T_MINUS";
        case MeshFace::CriticalLine: return "CRITICAL_LINE";
        case MeshFace::SliceBoundary: return "SLICE_BOUNDARY";
        case MeshFace::FocusFocus: return "FOCUS_FOCUS";
    }
    return "UNKNOWN";
}

double j_bound(double r) {
    if (!(r >= 0.0 && r <= 3.0)) {
        throw DomainError("j_bound: r must lie in [0, 3]");
    }
    const double u = (r * r - 3.0) / 6.0;
    double radicand = 1.0 + 2.0 * u * u * u - 3.0 * u * u;
    if (radicand < 0.0) {
        if (radicand < -1e-12) {
            throw DomainError("j_bound: negative radicand");
        }
        radicand = 0.0;
    }
    return std::sqrt(radicand);
}

bool in_image(const MomentValue& m, double tol) {
    if (m.h < -tol || m.h > 3.0 + tol) return false;
    if (std::abs(m.i) > m.h + tol) return false;
    const double r = std::clamp(m.h, 0.0, 3.0);
    return std::abs(m.j) <= j_bound(r) + tol;
}

double boundary_distance(const MomentValue& m) {
    const double r = std::clamp(m.h, 0.0, 3.0);
    return std::min({m.h, 3.0 - m.h, m.h - std::abs(m.i), j_bound(r) - std::abs(m.j)});
}

double critical_line_distance(const MomentValue& m) {
    const double ds = std::max(0.0, std::abs(m.i) - 1.0);
    return std::sqrt((m.h - 1.0) * (m.h - 1.0) + ds * ds + m.j * m.j);
}

namespace {

void put_row(Eigen::Matrix<double, Eigen::Dynamic, 9>& m, int row, const TangentTriple& t) {
    const auto f = t.flat();
    for (int k = 0; k < 9; ++k) m(row, k) = f[static_cast<std::size_t>(k)];
}

}  // namespace

int rank(const SpinTriple& p, double eps_h) {
    const bool h_smooth = h_value(p) > eps_h;
    Eigen::Matrix<double, Eigen::Dynamic, 9> m(h_smooth ? 3 : 2, 9);
    int row = 0;
    if (h_smooth) put_row(m, row++, x_h(p, eps_h));
    put_row(m, row++, x_i(p));
    put_row(m, row++, x_j(p));

    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) <= 0.0) return 0;
    int r = 0;
    for (Eigen::Index k = 0; k < sv.size(); ++k) {
        if (sv(k) > kRankThreshold * sv(0)) ++r;
    }
    return r;
}

CriticalClass classify(const SpinTriple& p, double tol) {
    const Vec3& x = p.x;
    const Vec3& y = p.y;
    const Vec3& z = p.z;
    const Vec3 s = p.sum();

    // Residuals of the membership predicates, most specific first.
    const double vertex = s.norm();
    const double s4 = std::max(distance(x, y), distance(y, z));
    const double s1 = std::max(distance(y, z), (x + y).norm());
    const double s2 = std::max(distance(x, z), (x + y).norm());
    const double s3 = std::max(distance(x, y), (x + z).norm());
    const double c1 = cross(s, e3).norm();
    const double a = dot(x, y), b = dot(y, z), c = dot(z, x);
    const double c2 = std::max(std::abs(a - b), std::abs(b - c));

    const int rk = rank(p);

    struct Candidate {
        CriticalTag tag;
        double residual;
    };
    const std::array<Candidate, 8> order{{
        {CriticalTag::VertexSO3, vertex},
        {CriticalTag::SphereS4, s4},
        {CriticalTag::SphereS1, s1},
        {CriticalTag::SphereS2, s2},
        {CriticalTag::SphereS3, s3},
        {CriticalTag::EdgeC1C2, std::max(c1, c2)},
        {CriticalTag::C1Face, c1},
        {CriticalTag::C2Face, c2},
    }};
    for (const auto& cand : order) {
        if (cand.residual <= tol) return {cand.tag, rk};
    }
    if (rk < 3) {
        // Rank-deficient but just outside tol of every predicate: report the closest set
        // so that REGULAR stays equivalent to rank 3.
        const auto best = std::min_element(order.begin(), order.end(),
                                           [](const Candidate& l, const Candidate& r) {
                                               return l.residual < r.residual;
                                           });
        return {best->tag, rk};
    }
    return {CriticalTag::Regular, rk};
}

SpinTriple construct_extremal(double r, int orientation) {
    if (!(r >= 0.0 && r <= 3.0)) {
        throw DomainError("construct_extremal: r must lie in [0, 3]");
    }
    if (orientation != 1 && orientation != -1) {
        throw DomainError("construct_extremal: orientation must be +1 or -1");
    }
    // Pairwise product u = (r^2-3)/6 with a common height zeta forces zeta = r/3.
    const double zeta = r / 3.0;
    const double rho = std::sqrt(std::max(0.0, 1.0 - zeta * zeta));
    std::array<UnitVec3, 3> v{kE3, kE3, kE3};
    for (int k = 0; k < 3; ++k) {
        const double phi = 2.0 * std::numbers::pi * k / 3.0;
        v[static_cast<std::size_t>(k)] =
            UnitVec3::normalized({rho * std::cos(phi), rho * std::sin(phi), zeta});
    }
    // Counterclockwise azimuths give J > 0; swapping Y and Z flips the sign.
    if (orientation > 0) return {v[0], v[1], v[2]};
    return {v[0], v[2], v[1]};
}

std::vector<SpinTriple> sample_points(std::size_t n, std::uint64_t seed) {
    std::vector<SpinTriple> out;
    out.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        CounterRng rng(seed, k);
        out.push_back(random_triple(rng));
    }
    return out;
}

std::vector<ImageSample> sample_image(std::size_t n, std::uint64_t seed) {
    if (n == 0) {
        throw DomainError("sample_image: n must be positive");
    }
    std::vector<ImageSample> out;
    out.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        CounterRng rng(seed, k);
        SpinTriple p = random_triple(rng);
        const MomentValue m = moment(p);
        const CriticalClass cls = classify(p);
        out.push_back({p, m, cls});
    }
    return out;
}

std::vector<MeshPoint> critical_value_set(std::size_t resolution) {
    if (resolution < 2) {
        throw DomainError("critical_value_set: resolution must be at least 2");
    }
    std::vector<MeshPoint> mesh;
    const auto n = resolution;
    const double last = static_cast<double>(n - 1);
    mesh.reserve(4 * n * n + n);
    for (std::size_t a = 0; a < n; ++a) {
        const double r = 3.0 * static_cast<double>(a) / last;
        const double jb = j_bound(r);
        for (std::size_t b = 0; b < n; ++b) {
            const double f = -1.0 + 2.0 * static_cast<double>(b) / last;
            mesh.push_back({r, r, f * jb, MeshFace::SPlus});
            mesh.push_back({r, -r, f * jb, MeshFace::SMinus});
            mesh.push_back({r, f * r, jb, MeshFace::TPlus});
            mesh.push_back({r, f * r, -jb, MeshFace::TMinus});
        }
    }
    for (std::size_t b = 0; b < n; ++b) {
        const double s = -1.0 + 2.0 * static_cast<double>(b) / last;
        mesh.push_back({1.0, s, 0.0, MeshFace::CriticalLine});
    }
    return mesh;
}

std::vector<MeshPoint> slice_curves(double s, std::size_t resolution) {
    if (resolution < 2) {
        throw DomainError("slice_curves: resolution must be at least 2");
    }
    if (!(std::abs(s) <= 3.0)) {
        throw DomainError("slice_curves: |s| must not exceed 3");
    }
    std::vector<MeshPoint> out;
    const double r0 = std::abs(s);
    const double last = static_cast<double>(resolution - 1);
    // Upper arc left to right, lower arc right to left, closed by the segment r = |s|.
    for (std::size_t a = 0; a < resolution; ++a) {
        const double r = r0 + (3.0 - r0) * static_cast<double>(a) / last;
        out.push_back({r, s, j_bound(r), MeshFace::SliceBoundary});
    }
    for (std::size_t a = resolution; a-- > 0;) {
        const double r = r0 + (3.0 - r0) * static_cast<double>(a) / last;
        out.push_back({r, s, -j_bound(r), MeshFace::SliceBoundary});
    }
    const double jb0 = j_bound(r0);
    for (std::size_t b = 1; b + 1 < resolution; ++b) {
        const double t = -jb0 + 2.0 * jb0 * static_cast<double>(b) / last;
        out.push_back({r0, s, t, MeshFace::SliceBoundary});
    }
    if (r0 < 1.0) out.push_back({1.0, s, 0.0, MeshFace::FocusFocus});
    return out;
}

}  // namespace spinchain

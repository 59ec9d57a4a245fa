#pragma once

// Image of the moment map (H, I, J), rank and critical-set classification,
// extremal configurations and figure data.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "spinchain/spin_system.hpp"

namespace spinchain {

enum class CriticalTag {
    Regular,
    C1Face,     // X + Y + Z in span(e3)
    C2Face,     // <X,Y> = <Y,Z> = <Z,X>
    EdgeC1C2,
    VertexSO3,  // H = 0
    SphereS1,   // (-X, X, X)
    SphereS2,   // (X, -X, X)
    SphereS3,   // (X, X, -X)
    SphereS4,   // (X, X, X), H = 3
};

std::string_view to_string(CriticalTag tag);

struct CriticalClass {
    CriticalTag tag = CriticalTag::Regular;
    int rank = 3;
};

struct ImageSample {
    SpinTriple point;
    MomentValue value;
    CriticalClass klass;
};

// sqrt(1 + 2u^3 - 3u^2) with u = (r^2 - 3)/6; DomainError outside [0, 3].
double j_bound(double r);

bool in_image(const MomentValue& m, double tol = 1e-9);

// Signed slack of the three image inequalities; positive inside, negative outside.
double boundary_distance(const MomentValue& m);
// Euclidean distance to the critical segment {(1, s, 0) : |s| <= 1}.
double critical_line_distance(const MomentValue& m);

inline constexpr double kRankThreshold = 1e-8;

// Numerical rank of the 3x9 matrix of stacked (X_H, X_I, X_J); the H row is dropped
// where H <= eps_h.
int rank(const SpinTriple& p, double eps_h = kHCutoff);

CriticalClass classify(const SpinTriple& p, double tol = 1e-9);

// Triple symmetric under 2pi/3 rotation about e3 with pairwise products (r^2-3)/6,
// sign(J) = orientation.
SpinTriple construct_extremal(double r, int orientation = 1);

std::vector<SpinTriple> sample_points(std::size_t n, std::uint64_t seed);
std::vector<ImageSample> sample_image(std::size_t n, std::uint64_t seed);

enum class MeshFace {
    SPlus,         // s = r
    SMinus,        // s = -r
    TPlus,         // t = j_bound(r)
    TMinus,        // t = -j_bound(r)
    CriticalLine,  // (1, s, 0)
    SliceBoundary,
    FocusFocus,
};

std::string_view to_string(MeshFace face);

struct MeshPoint {
    double r;
    double s;
    double t;
    MeshFace face;
};

// Boundary faces meshed on a resolution x resolution grid, followed by the critical line.
std::vector<MeshPoint> critical_value_set(std::size_t resolution);

// Boundary of the reduced image at fixed s in the (r, t) plane plus, when |s| < 1,
// the interior focus-focus value (1, s, 0).
std::vector<MeshPoint> slice_curves(double s, std::size_t resolution);

}  // namespace spinchain

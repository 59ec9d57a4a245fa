#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "spinchain/errors.hpp"
#include "spinchain/flows.hpp"
#include "spinchain/moment_map.hpp"
#include "spinchain/sampling.hpp"

using namespace spinchain;

namespace {

UnitVec3 unit_with_height(double s) { return UnitVec3::normalized({std::sqrt(1.0 - s * s), 0.0, s}); }

// Rotates every spin so that X + Y + Z points along the unit vector target.
SpinTriple align_sum_with(const SpinTriple& p, const Vec3& target) {
    const Vec3 a = p.sum() / p.sum().norm();
    Vec3 axis = cross(a, target);
    if (axis.norm() < 1e-12) {
        if (dot(a, target) > 0.0) return p;
        // Antiparallel: any axis orthogonal to a works.
        axis = cross(a, std::abs(a.x) < 0.9 ? e1 : e2);
    }
    const double angle = std::atan2(cross(a, target).norm(), dot(a, target));
    const Vec3 k = axis / axis.norm();
    return {rotate(p.x, k, angle), rotate(p.y, k, angle), rotate(p.z, k, angle)};
}

}  // namespace

TEST_SUITE("moment_map") {

TEST_CASE("j_bound values") {
    CHECK(j_bound(3.0) == doctest::Approx(0.0));
    CHECK(j_bound(std::sqrt(3.0)) == doctest::Approx(1.0));
    CHECK(j_bound(1.0) == doctest::Approx(4.0 / (3.0 * std::sqrt(3.0))).epsilon(1e-14));
    CHECK(j_bound(0.0) == doctest::Approx(0.0));
    CHECK_THROWS_AS(j_bound(-0.1), DomainError);
    CHECK_THROWS_AS(j_bound(3.1), DomainError);
}

TEST_CASE("in_image examples") {
    CHECK(in_image({std::sqrt(3.0), 1.0, 1.0}));
    CHECK_FALSE(in_image({1.0, 0.0, 0.9}));
    CHECK_FALSE(in_image({3.5, 0.0, 0.0}));
    CHECK_FALSE(in_image({1.0, 1.2, 0.0}));
    CounterRng rng(61, 0);
    for (int k = 0; k < 100000; ++k) CHECK(in_image(moment(random_triple(rng))));
}

TEST_CASE("rank examples") {
    CounterRng rng(62, 0);
    for (int k = 0; k < 100; ++k) CHECK(rank(random_triple(rng)) == 3);
    const UnitVec3 x = unit_with_height(0.3);
    CHECK(rank({x, x, x}) <= 1);
    for (double s : {-0.9, -0.2, 0.0, 0.5, 0.9}) {
        const UnitVec3 y = unit_with_height(s);
        CHECK(rank({-y, y, y}) == 1);
    }
}

TEST_CASE("classify examples") {
    const CriticalClass frame = classify({kE1, kE2, kE3});
    CHECK(frame.tag == CriticalTag::C2Face);
    CHECK(frame.rank == 2);

    const UnitVec3 x = unit_with_height(0.35);
    const CriticalClass s2 = classify({x, -x, x});
    CHECK(s2.tag == CriticalTag::SphereS2);
    CHECK(s2.rank == 1);
    CHECK(classify({-x, x, x}).tag == CriticalTag::SphereS1);
    CHECK(classify({x, x, -x}).tag == CriticalTag::SphereS3);
    CHECK(classify({kE3, -kE3, kE3}).rank == 0);
    CHECK(classify({x, x, x}).tag == CriticalTag::SphereS4);
    CHECK(classify(construct_extremal(0.0)).tag == CriticalTag::VertexSO3);

    // A generic triple rotated so that X + Y + Z is parallel to e3.
    CounterRng rng(63, 0);
    const SpinTriple c1 = align_sum_with(random_triple(rng), e3);
    const CriticalClass k1 = classify(c1);
    CHECK(k1.tag == CriticalTag::C1Face);
    CHECK(k1.rank == 2);

    for (int k = 0; k < 200; ++k) {
        const SpinTriple p = random_triple(rng);
        const CriticalClass c = classify(p);
        CHECK((c.tag == CriticalTag::Regular) == (c.rank == 3));
        CHECK(c.rank == rank(p));
    }
}

TEST_CASE("construct_extremal") {
    const SpinTriple top = construct_extremal(3.0);
    CHECK(distance(top, SpinTriple{kE3, kE3, kE3}) < 1e-12);
    const SpinTriple frame = construct_extremal(std::sqrt(3.0), 1);
    CHECK(std::abs(dot(frame.x, frame.y)) < 1e-12);
    CHECK(std::abs(dot(frame.y, frame.z)) < 1e-12);
    CHECK(j_value(frame) == doctest::Approx(1.0));
    CHECK(j_value(construct_extremal(std::sqrt(3.0), -1)) == doctest::Approx(-1.0));
    CHECK(h_value(construct_extremal(0.0)) < 1e-12);
    CHECK_THROWS_AS(construct_extremal(3.01), DomainError);
    CHECK_THROWS_AS(construct_extremal(1.0, 0), DomainError);

    for (int k = 1; k < 50; ++k) {
        const double r = 3.0 * k / 50.0;
        for (int o : {1, -1}) {
            const SpinTriple p = construct_extremal(r, o);
            CHECK(std::abs(h_value(p) - r) < 1e-12);
            CHECK(std::abs(std::abs(j_value(p)) - j_bound(r)) < 1e-10);
            CHECK(j_value(p) * o >= 0.0);
            // Rotating so the sum points along +-e3 drives I to +-r while keeping J.
            for (double sgn : {1.0, -1.0}) {
                const SpinTriple q = align_sum_with(p, sgn * e3);
                CHECK(std::abs(i_value(q) - sgn * r) < 1e-12);
                CHECK(std::abs(j_value(q) - j_value(p)) < 1e-12);
            }
        }
    }
}

TEST_CASE("sample_image") {
    CHECK_THROWS_AS(sample_image(0, 1), DomainError);
    const auto a = sample_image(20000, 9);
    const auto b = sample_image(20000, 9);
    std::size_t critical = 0;
    double max_h = 0.0;
    double max_j = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(a[k].point == b[k].point);
        CHECK(in_image(a[k].value));
        CHECK(a[k].value == moment(a[k].point));
        if (a[k].klass.rank < 3) ++critical;
        max_h = std::max(max_h, a[k].value.h);
        max_j = std::max(max_j, std::abs(a[k].value.j));
    }
    CHECK(critical < a.size() / 100);
    CHECK(max_h <= 3.0 + 1e-12);
    CHECK(max_j <= 1.0);
}

TEST_CASE("critical_value_set and slices") {
    CHECK_THROWS_AS(critical_value_set(1), DomainError);
    const auto mesh = critical_value_set(9);
    bool saw_endpoint = false;
    for (const auto& m : mesh) {
        CHECK(in_image({m.r, m.s, m.t}, 1e-12));
        if (m.face == MeshFace::CriticalLine) {
            CHECK(m.r == 1.0);
            CHECK(m.t == 0.0);
            if (std::abs(m.s) == 1.0) {
                saw_endpoint = true;
                CHECK(std::abs(std::abs(m.s) - m.r) < 1e-15);
            }
        }
    }
    CHECK(saw_endpoint);

    const auto slice = slice_curves(0.0, 11);
    std::size_t ff = 0;
    for (const auto& m : slice) {
        CHECK(m.s == 0.0);
        CHECK(in_image({m.r, m.s, m.t}, 1e-12));
        if (m.face == MeshFace::FocusFocus) {
            ++ff;
            CHECK(m.r == 1.0);
            CHECK(m.t == 0.0);
        }
    }
    CHECK(ff == 1);
    for (const auto& m : slice_curves(1.5, 11)) CHECK(m.face != MeshFace::FocusFocus);
    CHECK_THROWS_AS(slice_curves(3.5, 11), DomainError);
}

TEST_CASE("near an S1 point the critical values stay on the critical line") {
    // In a ball of radius 0.05 about (-x, x, x) the C1 and C2 predicates stay far from
    // zero, so the only critical points nearby lie on S1 and map to (1, s, 0).
    const UnitVec3 x = unit_with_height(0.2);
    const SpinTriple base{-x, x, x};
    CounterRng rng(64, 0);
    double c1_min = 1e9;
    double c2_min = 1e9;
    for (int k = 0; k < 2000; ++k) {
        std::array<UnitVec3, 3> v{base.x, base.y, base.z};
        for (auto& s : v) {
            const Vec3 d{rng.normal(), rng.normal(), rng.normal()};
            s = UnitVec3::normalized(s.vec() + (0.05 / std::sqrt(3.0)) * rng.uniform() * d / d.norm());
        }
        const SpinTriple p{v[0], v[1], v[2]};
        c1_min = std::min(c1_min, cross(p.sum(), e3).norm());
        c2_min = std::min(c2_min, std::abs(dot(p.x, p.y) - dot(p.y, p.z)));
        const CriticalClass c = classify(p);
        CHECK((c.tag == CriticalTag::Regular || c.tag == CriticalTag::SphereS1));
    }
    CHECK(c1_min > 0.5);
    CHECK(c2_min > 1.0);
    for (int k = 0; k < 200; ++k) {
        const double s = 0.2 + 0.05 * (2.0 * rng.uniform() - 1.0);
        const UnitVec3 y = rotate(unit_with_height(s), e3, 0.05 * rng.uniform());
        const MomentValue m = moment({-y, y, y});
        CHECK(critical_line_distance(m) < 1e-12);
        CHECK(rank({-y, y, y}) == 1);
    }
}

TEST_CASE("boundary and critical-line distances") {
    CHECK(boundary_distance({1.5, 0.0, 0.0}) > 0.0);
    CHECK(boundary_distance({1.0, 0.0, 0.9}) < 0.0);
    CHECK(critical_line_distance({1.0, 0.3, 0.0}) == 0.0);
    CHECK(critical_line_distance({1.3, 0.0, 0.4}) == doctest::Approx(0.5));
}

}  // TEST_SUITE

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "spinchain/errors.hpp"
#include "spinchain/flows.hpp"
#include "spinchain/moment_map.hpp"
#include "spinchain/monodromy.hpp"
#include "spinchain/sampling.hpp"

using namespace spinchain;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const SpinTriple kFrame{kE1, kE2, kE3};

double max_norm_defect(const SpinTriple& p) {
    double m = 0.0;
    for (int k = 0; k < 3; ++k) m = std::max(m, std::abs(p[k].vec().norm() - 1.0));
    return m;
}

}  // namespace

TEST_SUITE("flows") {

TEST_CASE("flow_i examples") {
    const SpinTriple q = flow_i(kFrame, std::numbers::pi / 2);
    CHECK(distance(q, SpinTriple{kE2, -kE1, kE3}) < 1e-15);
    CounterRng rng(41, 0);
    for (int k = 0; k < 1000; ++k) {
        const SpinTriple p = random_triple(rng);
        CHECK(distance(flow_i(p, kTwoPi), p) < 1e-12);
        CHECK(distance(moment(flow_i(p, 1.7)), moment(p)) < 1e-12);
        CHECK(max_norm_defect(flow_i(p, 0.9)) <= 1e-12);
    }
}

TEST_CASE("flow_h examples") {
    CHECK(distance(flow_h(kFrame, kTwoPi), kFrame) < 1e-12);
    const UnitVec3 x = UnitVec3::normalized({0.2, -0.4, 0.7});
    CHECK(distance(flow_h({x, x, x}, 0.8), SpinTriple{x, x, x}) < 1e-15);
    CounterRng rng(42, 0);
    for (int k = 0; k < 1000; ++k) {
        const SpinTriple p = oracle::random_triple_with_h_above(rng, 1e-3);
        CHECK(distance(flow_h(p, kTwoPi), p) < 1e-12);
        CHECK(distance(flow_h(p, 0.6).sum(), p.sum()) < 1e-14);
        CHECK(max_norm_defect(flow_h(p, 2.1)) <= 1e-12);
    }
    CounterRng zr(43, 0);
    CHECK_THROWS_AS(flow_h(oracle::random_zero_sum(zr), 1.0), SingularPointError);
}

TEST_CASE("flow_h and flow_i solve their vector fields") {
    CounterRng rng(44, 0);
    const double h = 1e-5;
    for (int k = 0; k < 50; ++k) {
        const SpinTriple p = oracle::random_triple_with_h_above(rng, 0.1);
        const TangentTriple xh = x_h(p);
        const TangentTriple xi = x_i(p);
        const SpinTriple hp = flow_h(p, h), hm = flow_h(p, -h);
        const SpinTriple ip = flow_i(p, h), im = flow_i(p, -h);
        for (int s = 0; s < 3; ++s) {
            CHECK(distance((hp[s].vec() - hm[s].vec()) / (2 * h), xh[s]) < 1e-8);
            CHECK(distance((ip[s].vec() - im[s].vec()) / (2 * h), xi[s]) < 1e-8);
        }
    }
}

TEST_CASE("flow_j fixes equilibria and solves X_J") {
    CHECK(distance(flow_j(kFrame, 3.0), kFrame) < 1e-14);
    CounterRng rng(45, 0);
    const SpinTriple p = random_triple(rng);
    const double h = 1e-4;
    const SpinTriple fp = flow_j(p, h), fm = flow_j(p, -h);
    const TangentTriple xj = x_j(p);
    for (int s = 0; s < 3; ++s) CHECK(distance((fp[s].vec() - fm[s].vec()) / (2 * h), xj[s]) < 1e-7);
    // Backward integration undoes forward integration.
    CHECK(distance(flow_j(flow_j(p, 2.5), -2.5), p) < 1e-9);
}

TEST_CASE("flow_j conserves H, I, J") {
    CounterRng rng(46, 0);
    for (int k = 0; k < 20; ++k) {
        const SpinTriple p = oracle::random_triple_with_h_above(rng, 0.1);
        const SpinTriple q = flow_j(p, 1.0);
        CHECK(distance(moment(q), moment(p)) < 1e-9);
        CHECK(max_norm_defect(q) <= 1e-12);
    }
}

TEST_CASE("flow_j on H^{-1}(0) is the rotation about [X, Y]") {
    CounterRng rng(47, 0);
    for (int k = 0; k < 10; ++k) {
        const SpinTriple p = oracle::random_zero_sum(rng);
        const Vec3 n = cross(p.x, p.y);
        for (double t : {0.5, 3.0, 10.0}) {
            const SpinTriple q = flow_j(p, t);
            for (int s = 0; s < 3; ++s) CHECK(distance(q[s], oracle::expm_rotate(p[s], n, t)) < 1e-8);
        }
    }
}

TEST_CASE("flows commute") {
    CounterRng rng(48, 0);
    for (int k = 0; k < 20; ++k) {
        const SpinTriple p = oracle::random_triple_with_h_above(rng, 0.1);
        const double s = rng.uniform();
        const double t = rng.uniform();
        CHECK(distance(flow_h(flow_j(p, t), s), flow_j(flow_h(p, s), t)) < 1e-8);
        CHECK(distance(flow_i(flow_j(p, t), s), flow_j(flow_i(p, s), t)) < 1e-8);
        CHECK(distance(flow_i(flow_h(p, t), s), flow_h(flow_i(p, s), t)) < 1e-12);
    }
}

TEST_CASE("flow_combo periods") {
    CounterRng rng(49, 0);
    const SpinTriple p = oracle::random_triple_with_h_above(rng, 0.1);
    CHECK(distance(flow_combo(p, {kTwoPi, 0, 0}), p) < 1e-10);
    CHECK(distance(flow_combo(p, {0, kTwoPi, 0}), p) < 1e-12);
    const FlowTimes tau{0.3, -0.8, 0.4};
    CHECK(distance(flow_combo(p, tau), flow_h(flow_i(flow_j(p, 0.4), -0.8), 0.3)) < 1e-15);
}

TEST_CASE("integrator configuration is validated") {
    IntegratorConfig bad;
    bad.tol = 0.0;
    CHECK_THROWS_AS(flow_j(kFrame, 1.0, bad), ParameterError);
    IntegratorConfig neg;
    neg.max_time = -1.0;
    CHECK_THROWS_AS(neg.validate(), ParameterError);
}

TEST_CASE("first_return closes the orbit") {
    const SpinTriple p = find_fiber_point({1.3, 0.0, 0.0}, 5);
    const FirstReturn fr = first_return(p);
    CHECK(fr.residual < kReturnResidual);
    CHECK(fr.period > 0.0);
    CHECK(fr.alpha >= 0.0);
    CHECK(fr.alpha < kTwoPi);
    CHECK(fr.beta >= 0.0);
    CHECK(fr.beta < kTwoPi);
    CHECK(distance(flow_combo(p, fr.as_flow_times()), p) < 1e-8);
}

TEST_CASE("first_return is a property of the fiber") {
    const SpinTriple p = find_fiber_point({1.5, 0.2, 0.1}, 3);
    const FirstReturn a = first_return(p);
    const FirstReturn b = first_return(flow_i(p, 0.3));
    CHECK(std::abs(a.period - b.period) < 1e-6);
    CHECK(std::abs(std::remainder(a.alpha - b.alpha, kTwoPi)) < 1e-6);
    CHECK(std::abs(std::remainder(a.beta - b.beta, kTwoPi)) < 1e-6);
}

TEST_CASE("first_return depends continuously on the value") {
    const SpinTriple p = find_fiber_point({1.5, 0.2, 0.1}, 3);
    const SpinTriple q = find_fiber_point({1.5, 0.2, 0.101}, 3, p);
    const FirstReturn a = first_return(p);
    const FirstReturn b = first_return(q);
    CHECK(std::abs(a.period - b.period) < 1e-2);
    CHECK(std::abs(std::remainder(a.alpha - b.alpha, kTwoPi)) < 1e-2);
    CHECK(std::abs(std::remainder(a.beta - b.beta, kTwoPi)) < 1e-2);
}

TEST_CASE("first_return rejects critical points and short horizons") {
    CHECK_THROWS_AS(first_return(kFrame), DomainError);
    CounterRng rng(50, 0);
    CHECK_THROWS_AS(first_return(oracle::random_zero_sum(rng)), SingularPointError);
    const SpinTriple p = find_fiber_point({1.3, 0.0, 0.0}, 5);
    IntegratorConfig cfg;
    cfg.max_time = 1.0;
    CHECK_THROWS_AS(first_return(p, cfg), SearchError);
}

TEST_CASE("torus orbit distance vanishes on the orbit") {
    CounterRng rng(51, 0);
    const SpinTriple p = oracle::random_triple_with_h_above(rng, 0.2);
    const SpinTriple q = flow_h(flow_i(p, 1.1), 2.3);
    const OrbitDistance d = torus_orbit_distance(q, p);
    CHECK(d.distance < 1e-12);
    CHECK(distance(flow_h(flow_i(q, d.beta), d.alpha), p) < 1e-12);
}

}  // TEST_SUITE

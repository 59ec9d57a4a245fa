#include "spinchain/sampling.hpp"

#include <cmath>
#include <numbers>

namespace spinchain {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t index)
    : state_(mix(seed + kGolden) ^ mix(index * kGolden + 0x632BE59BD9B4E019ULL)) {}

CounterRng::result_type CounterRng::operator()() {
    state_ += kGolden;
    return mix(state_);
}

double CounterRng::uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

double CounterRng::normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

UnitVec3 random_unit(CounterRng& rng) {
    for (;;) {
        const Vec3 g{rng.normal(), rng.normal(), rng.normal()};
        if (g.norm2() > 1e-24) return UnitVec3::normalized(g);
    }
}

SpinTriple random_triple(CounterRng& rng) {
    const UnitVec3 a = random_unit(rng);
    const UnitVec3 b = random_unit(rng);
    const UnitVec3 c = random_unit(rng);
    return {a, b, c};
}

SpinChain random_chain(CounterRng& rng, std::size_t n) {
    std::vector<UnitVec3> spins;
    spins.reserve(n);
    for (std::size_t k = 0; k < n; ++k) spins.push_back(random_unit(rng));
    return SpinChain{std::move(spins)};
}

}  // namespace spinchain

#pragma once

#include <cstdint>
#include <limits>

#include "spinchain/spin_system.hpp"

namespace spinchain {

// SplitMix64 stream. Streams are keyed by (seed, index) so that sample k of a run
// does not depend on how the work is split across workers.
class CounterRng {
public:
    using result_type = std::uint64_t;

    CounterRng(std::uint64_t seed, std::uint64_t index);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()();

    // Uniform on [0, 1).
    double uniform();
    // Standard normal (Box-Muller, no cached state).
    double normal();

private:
    std::uint64_t state_;
};

// Normalized standard Gaussian.
UnitVec3 random_unit(CounterRng& rng);
SpinTriple random_triple(CounterRng& rng);
SpinChain random_chain(CounterRng& rng, std::size_t n);

}  // namespace spinchain

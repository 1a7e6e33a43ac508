#pragma once

#include <array>
#include <cstdint>

namespace plekit {

// Seedable 64-bit generator used by every synthetic-data path. The algorithm
// is xoshiro256++ (Blackman & Vigna, 2019) with the state initialized from
// the seed via splitmix64; both are fixed for reproducibility, so a given
// seed yields the same stream on every platform and in every future version.
//
// Distributions are implemented here rather than with <random> because the
// standard leaves distribution algorithms unspecified:
//   - normal(): Box-Muller, consuming exactly two uniforms per call
//   - poisson(): sequential inversion for mean < 30, rounded and clamped
//     normal approximation mean + sqrt(mean)*z above
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();
    double uniform();      // [0, 1)
    double normal(double mean = 0.0, double stddev = 1.0);
    double poisson(double mean);

private:
    std::array<std::uint64_t, 4> state_;
};

} // namespace plekit

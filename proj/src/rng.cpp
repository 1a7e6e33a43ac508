#include "plekit/rng.hpp"

#include <cmath>

#include "plekit/errors.hpp"

namespace plekit {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

constexpr double kTwoPi = 6.283185307179586476925286766559;

} // namespace

Rng::Rng(std::uint64_t seed) {
    std::uint64_t s = seed;
    for (auto& w : state_) w = splitmix64(s);
}

std::uint64_t Rng::next_u64() {
    std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double Rng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::normal(double mean, double stddev) {
    double u1 = 1.0 - uniform(); // (0, 1], keeps log finite
    double u2 = uniform();
    return mean + stddev * std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

double Rng::poisson(double mean) {
    if (mean < 0.0 || !std::isfinite(mean)) throw ConfigError("poisson mean must be non-negative and finite");
    if (mean == 0.0) return 0.0;
    if (mean < 30.0) {
        double u = uniform();
        double p = std::exp(-mean);
        double cum = p;
        double k = 0.0;
        while (u > cum && k < 1000.0) {
            k += 1.0;
            p *= mean / k;
            cum += p;
        }
        return k;
    }
    double k = std::round(mean + std::sqrt(mean) * normal());
    return k < 0.0 ? 0.0 : k;
}

} // namespace plekit

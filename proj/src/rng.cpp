#include "oam/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace oam {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace

std::uint64_t Rng::deriveSeed(std::uint64_t master, std::string_view tag,
                              std::uint64_t i0, std::uint64_t i1) {
    std::uint64_t x = master;
    x ^= fnv1a(tag);
    splitmix64(x);
    x ^= i0 * 0x9e3779b97f4a7c15ULL;
    splitmix64(x);
    x ^= i1 * 0xc2b2ae3d27d4eb4fULL;
    return splitmix64(x);
}

std::uint64_t Rng::next() { return splitmix64(state_); }

double Rng::uniform() {
    return (next() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 1e-300) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
}

std::uint64_t Rng::poisson(double mu) {
    if (mu < 0.0) throw std::invalid_argument("poisson: mu must be >= 0");
    if (mu == 0.0) return 0;
    // split large means so the inversion stays in exact range
    std::uint64_t total = 0;
    while (mu > 30.0) {
        const double half = mu / 2.0;
        total += poisson(half);
        mu -= half;
    }
    const double L = std::exp(-mu);
    double p = 1.0;
    std::uint64_t k = 0;
    do {
        ++k;
        p *= uniform();
    } while (p > L);
    return total + k - 1;
}

} // namespace oam

#pragma once

#include <cstdint>
#include <string_view>

namespace oam {

// Deterministic, platform-independent RNG with keyed splittable streams.
// Streams are derived from (master seed, tag, indices), so parallel and
// serial evaluation orders produce identical draws.
class Rng {
public:
    explicit Rng(std::uint64_t seed)
        : state_(seed ^ 0x9e3779b97f4a7c15ULL), origin_(seed) { next(); }

    static std::uint64_t deriveSeed(std::uint64_t master, std::string_view tag,
                                    std::uint64_t i0 = 0, std::uint64_t i1 = 0);

    Rng stream(std::string_view tag, std::uint64_t i0 = 0, std::uint64_t i1 = 0) const {
        return Rng(deriveSeed(origin_, tag, i0, i1));
    }

    std::uint64_t next();
    double uniform();                    // [0,1)
    double normal();                     // standard normal (Box-Muller)
    std::uint64_t poisson(double mu);

private:
    std::uint64_t state_;
    std::uint64_t origin_ = 0;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace oam

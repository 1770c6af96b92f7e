#pragma once

#include <cstdint>

#include "qrm/grid.hpp"

namespace qrm {

/// Multiplicative noise: each sample v becomes v * (1 + gamma * N) with
/// N uniform in the open interval (-1, 1).
struct NoiseSpec {
    double gamma = 0.0;     // noise level, >= 0 (operating range 0.05..0.5)
    std::uint64_t seed = 0; // stream seed; same seed reproduces bit-identical draws
};

/// SplitMix64. Fully specified so that draws are bit-reproducible across
/// implementations: state advances by the golden-ratio increment
/// 0x9E3779B97F4A7C15 and the output is finalized with the mixing constants
/// 0xBF58476D1CE4E5B9 (xor-shift 30) and 0x94D049BB133111EB (xor-shift 27),
/// then xor-shift 31.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform draw in the open interval (-1, 1): the top 53 bits are
    /// offset by 1/2 so the unit draw lies in (0, 1) strictly.
    double next_symmetric() {
        double unit = (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
        return 2.0 * unit - 1.0;
    }

private:
    std::uint64_t state_;
};

/// Seed of the independent sub-stream used for one (segment, f-or-g) pair;
/// derived by one SplitMix64 finalization of seed + (tag+1) * increment.
std::uint64_t substream_seed(std::uint64_t seed, Segment s, bool is_flux);

/// Corrupt every stored sample of every segment (f and g) multiplicatively.
/// Draws are independent per sample and per function; each (segment,
/// function) pair consumes its own sub-stream, so adding or editing one
/// segment never shifts another segment's draws. Zero samples stay zero.
CauchyData add_noise(const CauchyData& data, const NoiseSpec& spec);

} // namespace qrm

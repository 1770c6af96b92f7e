#include "qrm/noise.hpp"

#include <stdexcept>

namespace qrm {

std::uint64_t substream_seed(std::uint64_t seed, Segment s, bool is_flux) {
    std::uint64_t tag = 2u * static_cast<std::uint64_t>(s) + (is_flux ? 1u : 0u);
    SplitMix64 mixer(seed + (tag + 1u) * 0x9E3779B97F4A7C15ULL);
    return mixer.next();
}

CauchyData add_noise(const CauchyData& data, const NoiseSpec& spec) {
    if (spec.gamma < 0.0) throw std::invalid_argument("noise level must be nonnegative");
    if (spec.gamma == 0.0) return data;

    CauchyData noisy = data;
    for (Segment s : kSegments) {
        SplitMix64 rf(substream_seed(spec.seed, s, false));
        for (double& v : noisy.seg(s).f) v *= 1.0 + spec.gamma * rf.next_symmetric();
        SplitMix64 rg(substream_seed(spec.seed, s, true));
        for (double& v : noisy.seg(s).g) v *= 1.0 + spec.gamma * rg.next_symmetric();
    }
    return noisy;
}

} // namespace qrm

#include "repscore/resample.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace repscore {
namespace {

constexpr int kSincHalfWidth = 32;  // taps per side at the output rate

double sinc(double x) {
    if (std::fabs(x) < 1e-12) return 1.0;
    const double px = std::numbers::pi * x;
    return std::sin(px) / px;
}

}  // namespace

AudioBuffer resample(const AudioBuffer& buf, int target_rate) {
    if (target_rate <= 0) throw std::invalid_argument("resample: target rate must be positive");
    if (buf.sample_rate <= 0) throw std::invalid_argument("resample: invalid source rate");
    if (target_rate == buf.sample_rate) return buf;

    const double ratio = static_cast<double>(target_rate) / buf.sample_rate;
    const std::size_t in_len = buf.samples.size();
    const std::size_t out_len =
        static_cast<std::size_t>(std::llround(static_cast<double>(in_len) * ratio));

    // cutoff (as fraction of source Nyquist) and kernel half-width in input samples
    const double scale = std::min(1.0, ratio);
    const int half = static_cast<int>(std::ceil(kSincHalfWidth / scale));

    AudioBuffer out;
    out.sample_rate = target_rate;
    out.bandpassed = buf.bandpassed;
    out.samples.resize(out_len);

    for (std::size_t j = 0; j < out_len; ++j) {
        const double center = static_cast<double>(j) / ratio;
        const int lo = std::max(0, static_cast<int>(std::ceil(center)) - half);
        const int hi = std::min(static_cast<int>(in_len) - 1,
                                static_cast<int>(std::floor(center)) + half);
        double acc = 0.0;
        for (int i = lo; i <= hi; ++i) {
            const double u = center - i;
            // Hann window over [-half, half]
            const double w = 0.5 + 0.5 * std::cos(std::numbers::pi * u / half);
            acc += buf.samples[static_cast<std::size_t>(i)] * scale * sinc(scale * u) * w;
        }
        out.samples[j] = acc;
    }
    return out;
}

}  // namespace repscore

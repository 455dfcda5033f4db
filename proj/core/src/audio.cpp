#include "repscore/audio.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "repscore/fft.hpp"

namespace repscore {

AudioBuffer normalize_peak(AudioBuffer buf) {
    double peak = 0.0;
    for (double s : buf.samples) peak = std::max(peak, std::fabs(s));
    if (peak <= 1e-300) return buf;
    for (double& s : buf.samples) s /= peak;
    return buf;
}

AudioBuffer bandpass(const AudioBuffer& buf, double lo_hz, double hi_hz) {
    if (buf.sample_rate <= 0) throw std::invalid_argument("bandpass: invalid sample rate");
    if (!(0.0 <= lo_hz && lo_hz < hi_hz && hi_hz <= buf.sample_rate / 2.0))
        throw std::invalid_argument("bandpass: band outside [0, rate/2]");
    AudioBuffer out = buf;
    out.bandpassed = true;
    if (buf.samples.empty()) return out;
    auto spec = rfft(buf.samples);
    const std::size_t n = buf.samples.size();
    for (std::size_t k = 0; k < spec.size(); ++k) {
        const double f = static_cast<double>(k) * buf.sample_rate / static_cast<double>(n);
        if (f < lo_hz || f > hi_hz) spec[k] = 0.0;
    }
    out.samples = irfft(spec, n);
    return out;
}

}  // namespace repscore

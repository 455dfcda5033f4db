#include "repscore/stft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "repscore/errors.hpp"
#include "repscore/fft.hpp"

namespace repscore {

std::vector<double> make_window(WindowKind kind, int len) {
    std::vector<double> w(static_cast<std::size_t>(len), 1.0);
    if (kind == WindowKind::Hamming) {
        for (int n = 0; n < len; ++n)
            w[static_cast<std::size_t>(n)] =
                0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * n / len);
    }
    return w;
}

Spectrogram stft(const AudioBuffer& buf, int frame_len, int hop, WindowKind window) {
    if (hop < 1 || frame_len < hop)
        throw std::invalid_argument("stft: require frame_len >= hop >= 1");
    if (buf.samples.size() < static_cast<std::size_t>(frame_len))
        throw BufferTooShort("stft needs at least one frame");

    const std::size_t n_frames = (buf.samples.size() - frame_len) / hop + 1;
    const auto win = make_window(window, frame_len);

    Spectrogram spec;
    spec.frame_len = frame_len;
    spec.hop = hop;
    spec.window = window;
    spec.sample_rate = buf.sample_rate;
    spec.frames.reserve(n_frames);

    std::vector<double> frame(static_cast<std::size_t>(frame_len));
    for (std::size_t l = 0; l < n_frames; ++l) {
        const double* src = buf.samples.data() + l * hop;
        for (int n = 0; n < frame_len; ++n)
            frame[static_cast<std::size_t>(n)] = src[n] * win[static_cast<std::size_t>(n)];
        spec.frames.push_back(rfft(frame));
    }
    return spec;
}

AudioBuffer istft(const Spectrogram& spec) {
    if (spec.frames.empty()) {
        AudioBuffer out;
        out.sample_rate = spec.sample_rate;
        return out;
    }
    const int frame_len = spec.frame_len;
    const int hop = spec.hop;
    const std::size_t expected_bins = static_cast<std::size_t>(frame_len) / 2 + 1;
    for (const auto& f : spec.frames)
        if (f.size() != expected_bins)
            throw std::invalid_argument("istft: frame bin count does not match frame_len");

    const auto win = make_window(spec.window, frame_len);
    const std::size_t out_len = (spec.frames.size() - 1) * hop + frame_len;
    std::vector<double> acc(out_len, 0.0);
    std::vector<double> wsum(out_len, 0.0);

    for (std::size_t l = 0; l < spec.frames.size(); ++l) {
        auto frame = irfft(spec.frames[l], static_cast<std::size_t>(frame_len));
        const std::size_t off = l * hop;
        for (int n = 0; n < frame_len; ++n) {
            acc[off + n] += frame[static_cast<std::size_t>(n)];
            wsum[off + n] += win[static_cast<std::size_t>(n)];
        }
    }

    // Interior coverage must be bounded away from zero or the overlap cannot
    // be inverted (e.g. rectangular frames that do not tile the signal).
    for (std::size_t i = 0; i < out_len; ++i) {
        if (wsum[i] < 1e-9)
            throw IncompatibleOverlap("window overlap leaves uncovered samples");
        acc[i] /= wsum[i];
    }

    AudioBuffer out;
    out.sample_rate = spec.sample_rate;
    out.samples = std::move(acc);
    return out;
}

}  // namespace repscore

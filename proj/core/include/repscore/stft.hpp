#pragma once

#include <complex>
#include <vector>

#include "repscore/audio.hpp"

namespace repscore {

enum class WindowKind { Rectangular, Hamming };

/// Analysis window samples (periodic form, so 50% overlap-add of the Hamming
/// window sums to a constant).
std::vector<double> make_window(WindowKind kind, int len);

/// One-sided STFT. frames[l][k] is bin k of frame l; frame l covers samples
/// [l*hop, l*hop + frame_len). Trailing samples that do not fill a whole
/// frame are dropped.
struct Spectrogram {
    std::vector<std::vector<std::complex<double>>> frames;
    int frame_len = 0;
    int hop = 0;
    WindowKind window = WindowKind::Hamming;
    int sample_rate = 0;

    std::size_t n_frames() const { return frames.size(); }
    std::size_t n_bins() const { return frames.empty() ? 0 : frames[0].size(); }
};

Spectrogram stft(const AudioBuffer& buf, int frame_len, int hop, WindowKind window);

/// Overlap-add inverse, normalized by the accumulated analysis window so the
/// round trip is exact (< 1e-6) wherever the window coverage is nonzero.
/// Output length is (n_frames - 1) * hop + frame_len.
AudioBuffer istft(const Spectrogram& spec);

}  // namespace repscore

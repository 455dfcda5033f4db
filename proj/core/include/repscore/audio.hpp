#pragma once

#include <vector>

namespace repscore {

constexpr int kCanonicalRate = 16000;

/// Mono sample sequence. The whole pipeline operates on peak-normalized
/// buffers at the canonical 16 kHz rate; `bandpassed` marks that the
/// 300-3000 Hz band-pass has been applied (segmentation requires it).
struct AudioBuffer {
    std::vector<double> samples;
    int sample_rate = 0;
    bool bandpassed = false;

    double duration() const {
        return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
    }
};

/// Scale so that max |sample| == 1. All-zero (or sub-epsilon) buffers pass
/// through untouched. Idempotent: applying twice gives the exact same samples.
AudioBuffer normalize_peak(AudioBuffer buf);

/// Zero-phase band-pass: full-signal FFT, bins with center frequency outside
/// [lo_hz, hi_hz] zeroed, inverse transform. Output length equals input length.
AudioBuffer bandpass(const AudioBuffer& buf, double lo_hz, double hi_hz);

}  // namespace repscore

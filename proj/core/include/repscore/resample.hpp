#pragma once

#include "repscore/audio.hpp"

namespace repscore {

/// Band-limited sample-rate conversion (Hann-windowed sinc interpolation).
/// Output length is round(len * target / rate); when target == rate the
/// buffer is returned unchanged, bit for bit.
AudioBuffer resample(const AudioBuffer& buf, int target_rate);

}  // namespace repscore

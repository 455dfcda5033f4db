#pragma once

#include <string>

#include "repscore/audio.hpp"

namespace repscore {

/// Decode a RIFF/WAVE file. Accepts PCM 16-bit integer and IEEE float 32-bit,
/// 1 or 2 channels; stereo is downmixed by channel mean. 16-bit samples are
/// scaled by 1/32768. The original sample rate is preserved.
AudioBuffer load_wav(const std::string& path);

/// Write mono PCM 16-bit. Samples are clamped to [-1, 1] before quantization.
void save_wav(const std::string& path, const AudioBuffer& buf);

}  // namespace repscore

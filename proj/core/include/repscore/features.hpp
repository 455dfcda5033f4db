#pragma once

#include <array>
#include <string>
#include <vector>

#include "repscore/audio.hpp"

namespace repscore {

constexpr int kNumShortTermFeatures = 23;
constexpr int kNumFeatures = 46;  // short-term + mid-term means

// Column layout (normative for model files):
//   0..12  MFCC 1-13
//   13     zero-crossing rate
//   14     energy (mean squared amplitude)
//   15     energy entropy
//   16     spectral centroid (Hz)
//   17     spectral spread (Hz)
//   18     spectral entropy
//   19     spectral flux
//   20     spectral rolloff (Hz, 90th percentile)
//   21     fundamental frequency (Hz)
//   22     harmonic ratio
//   23..45 mid-term means of columns 0..22
extern const std::array<const char*, kNumFeatures> kFeatureNames;

constexpr double kShortFrameSec = 0.06;
constexpr double kShortHopSec = 0.02;
constexpr double kMidFrameSec = 0.3;
constexpr double kMidHopSec = 0.1;

struct FeatureMatrix {
    std::vector<std::array<double, kNumFeatures>> rows;
    std::vector<double> frame_times;  // start time of each short frame (s)

    std::size_t n_rows() const { return rows.size(); }
};

/// The 23 short-term features of one frame. `prev_magnitude` is the magnitude
/// spectrum of the previous frame for spectral flux (empty on the first frame).
std::array<double, kNumShortTermFeatures> short_term_features(
    const std::vector<double>& frame, const std::vector<double>& prev_magnitude,
    int sample_rate, std::vector<double>* magnitude_out = nullptr);

/// Full 46-column matrix: short-term features per 0.06 s frame (0.02 s hop)
/// plus mid-term means over 0.3 s windows (0.1 s hop); each frame takes the
/// mid-term vector of the latest mid window containing its start time.
FeatureMatrix extract_features(const AudioBuffer& buf);

/// One row per frame, header with feature names.
void write_features_csv(const std::string& path, const FeatureMatrix& features);

}  // namespace repscore

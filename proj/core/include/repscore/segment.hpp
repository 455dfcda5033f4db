#pragma once

#include <string>
#include <vector>

#include "repscore/audio.hpp"

namespace repscore {

constexpr double kEnvelopeWindowSec = 0.05;
constexpr double kEnvelopeHopSec = 0.01;
constexpr double kEnergyThreshold = 0.05;
constexpr double kConcatCutoffSec = 0.02;
constexpr double kMinRegionSec = 0.05;

/// Thresholded mean-squared-amplitude envelope of band-passed audio.
struct EnergyEnvelope {
    std::vector<double> values;  // E(t): raw where raw > threshold, else 0
    std::vector<double> raw;     // E'(t): mean squared amplitude per window
    double window_len = kEnvelopeWindowSec;
    double hop = kEnvelopeHopSec;
    double sigma = 0.0;  // standard deviation of values (zeros included)
    double threshold = kEnergyThreshold;

    double time_of(std::size_t idx) const { return static_cast<double>(idx) * hop; }
};

/// Breakpoint times, all expressed as envelope window indices.
/// minima_early[i] / minima_late[i] are the earliest/latest index of the i-th
/// local-minimum plateau (index 0 is the signal start); maxima[i] is the
/// earliest local maximum between plateaus i-1 and i.
struct SegmentationTrace {
    std::vector<std::size_t> minima_early;  // t_i
    std::vector<std::size_t> minima_late;   // t_i'
    std::vector<std::size_t> maxima;        // T_i, size = minima count - 1
    std::vector<std::size_t> kept;          // indices i selected by the sigma test
};

enum class RegionSource { Initial, Concatenated };

struct Region {
    double start = 0.0;  // seconds
    double end = 0.0;
    double mean_energy = 0.0;
    RegionSource source = RegionSource::Initial;

    double duration() const { return end - start; }
};

struct RegionSet {
    EnergyEnvelope envelope;
    std::vector<Region> regions;
};

/// E'(t) per 0.05 s window at 0.01 s hop; E(t) thresholded at 0.05.
/// Requires a band-passed buffer (bandpassed flag set).
EnergyEnvelope energy_envelope(const AudioBuffer& buf);

SegmentationTrace find_breakpoints(const EnergyEnvelope& env);

/// Regions delimited by the prominence-over-sigma selection rule: each kept
/// minimum closes a region that started at the late edge of the previous one.
std::vector<Region> select_regions(const SegmentationTrace& trace, const EnergyEnvelope& env);

/// For each run of successive gaps < cutoff, add the spanning regions (all
/// prefixes of the chain); originals retained, result deduplicated and
/// stripped of regions shorter than 0.05 s.
std::vector<Region> concatenate_regions(std::vector<Region> regions,
                                        double cutoff = kConcatCutoffSec);

/// bandpass 300-3000 Hz -> envelope -> breakpoints -> selection -> concatenation.
RegionSet segment(const AudioBuffer& buf);

/// JSON array [{start, end, mean_energy, source}].
std::string regions_to_json(const std::vector<Region>& regions);

/// Audacity-style label track: start<TAB>end<TAB>label, one region per line.
void write_label_track(const std::string& path, const std::vector<Region>& regions);

}  // namespace repscore

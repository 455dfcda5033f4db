#pragma once

#include <cstdint>
#include <vector>

#include "repscore/audio.hpp"
#include "repscore/scoring.hpp"
#include "repscore/segment.hpp"

namespace repscore {

constexpr double kFingerprintWindowSec = 0.1;
constexpr int kFingerprintBands = 32;       // M
constexpr double kBandLoHz = 300.0;
constexpr double kBandHiHz = 3000.0;
constexpr double kMinCompareRegionSec = 0.2;
constexpr double kMaxDurationRatio = 4.0;

/// Signs of second-order finite differences of band energies across
/// non-overlapping 0.1 s windows: rows n = 2..N, columns m = 1..M-1.
struct Fingerprint {
    std::vector<std::vector<uint8_t>> bits;  // (N-1) x (M-1)
    std::size_t n_windows = 0;               // N
    int n_bands = kFingerprintBands;         // M
};

Fingerprint fingerprint(const AudioBuffer& buf, const Region& region);

/// Hamming fraction after truncating both prints to the shorter window count.
double fingerprint_distance(const Fingerprint& a, const Fingerprint& b);

/// Mean over in-band DFT coefficients of the across-window correlation of
/// magnitude spectra (0.1 s windows, 50% overlap; both regions truncated to
/// the smaller window count). Coefficients with zero variance in either
/// region are skipped; 0 if none remain.
double correlation_similarity(const AudioBuffer& buf, const Region& r1, const Region& r2);

/// All unordered pairs of non-overlapping regions with duration ratio <= 4.
/// Pairs where either region is shorter than 0.2 s score E = 1, C = 0, S = 0.
std::vector<PairScore> compare_all(const AudioBuffer& buf, const RegionSet& regions);

/// CSV audit dump: idx_a, idx_b, E, C, S, mean_energy.
void write_pairs_csv(const std::string& path, const std::vector<PairScore>& pairs);

}  // namespace repscore

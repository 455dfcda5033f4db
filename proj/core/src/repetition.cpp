#include "repscore/repetition.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "repscore/errors.hpp"
#include "repscore/fft.hpp"

namespace repscore {
namespace {

std::size_t region_first_sample(const Region& r, int rate) {
    return static_cast<std::size_t>(std::max(0.0, std::round(r.start * rate)));
}

std::size_t region_last_sample(const Region& r, int rate, std::size_t buf_len) {
    const auto end = static_cast<std::size_t>(std::max(0.0, std::round(r.end * rate)));
    return std::min(end, buf_len);
}

// Band energies of one 0.1 s window: DFT magnitude squared summed per band,
// M = 32 equal-width bands across 300-3000 Hz.
std::vector<double> band_energies(std::span<const double> window, int rate) {
    const auto spectrum = rfft(window);
    const double band_width = (kBandHiHz - kBandLoHz) / kFingerprintBands;
    std::vector<double> bands(kFingerprintBands, 0.0);
    for (std::size_t k = 0; k < spectrum.size(); ++k) {
        const double f = static_cast<double>(k) * rate / static_cast<double>(window.size());
        if (f < kBandLoHz || f > kBandHiHz) continue;
        auto m = static_cast<std::size_t>((f - kBandLoHz) / band_width);
        m = std::min(m, static_cast<std::size_t>(kFingerprintBands - 1));
        bands[m] += std::norm(spectrum[k]);
    }
    return bands;
}

// Per-region spectral cache for correlation: magnitude of in-band DFT
// coefficients over 0.1 s windows at 50% overlap, [window][coefficient].
struct CorrelationWindows {
    std::vector<std::vector<double>> mag;
};

CorrelationWindows correlation_windows(const AudioBuffer& buf, const Region& region) {
    const int rate = buf.sample_rate;
    const auto win_len = static_cast<std::size_t>(std::lround(kFingerprintWindowSec * rate));
    const std::size_t hop = win_len / 2;
    const std::size_t first = region_first_sample(region, rate);
    const std::size_t last = region_last_sample(region, rate, buf.samples.size());
    CorrelationWindows out;
    if (last < first + win_len) return out;

    const std::size_t n_win = (last - first - win_len) / hop + 1;
    const std::size_t k_lo = static_cast<std::size_t>(
        std::ceil(kBandLoHz * static_cast<double>(win_len) / rate));
    const std::size_t k_hi = static_cast<std::size_t>(
        std::floor(kBandHiHz * static_cast<double>(win_len) / rate));

    out.mag.reserve(n_win);
    for (std::size_t n = 0; n < n_win; ++n) {
        const auto spectrum = rfft(
            std::span(buf.samples.data() + first + n * hop, win_len));
        std::vector<double> row;
        row.reserve(k_hi - k_lo + 1);
        for (std::size_t k = k_lo; k <= k_hi && k < spectrum.size(); ++k)
            row.push_back(std::abs(spectrum[k]));
        out.mag.push_back(std::move(row));
    }
    return out;
}

double correlation_from_windows(const CorrelationWindows& a, const CorrelationWindows& b) {
    const std::size_t n = std::min(a.mag.size(), b.mag.size());
    if (n < 2 || a.mag[0].size() != b.mag[0].size()) return 0.0;
    const std::size_t n_coef = a.mag[0].size();

    double acc = 0.0;
    std::size_t kept = 0;
    for (std::size_t m = 0; m < n_coef; ++m) {
        double mean_a = 0.0, mean_b = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            mean_a += a.mag[i][m];
            mean_b += b.mag[i][m];
        }
        mean_a /= static_cast<double>(n);
        mean_b /= static_cast<double>(n);
        double var_a = 0.0, var_b = 0.0, cov = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double da = a.mag[i][m] - mean_a;
            const double db = b.mag[i][m] - mean_b;
            var_a += da * da;
            var_b += db * db;
            cov += da * db;
        }
        if (var_a <= 0.0 || var_b <= 0.0) continue;  // zero variance, no evidence
        acc += cov / std::sqrt(var_a * var_b);
        ++kept;
    }
    if (kept == 0) return 0.0;
    return std::clamp(acc / static_cast<double>(kept), -1.0, 1.0);
}

bool overlapping(const Region& a, const Region& b) {
    return a.start < b.end && b.start < a.end;
}

}  // namespace

Fingerprint fingerprint(const AudioBuffer& buf, const Region& region) {
    const int rate = buf.sample_rate;
    const auto win_len = static_cast<std::size_t>(std::lround(kFingerprintWindowSec * rate));
    const std::size_t first = region_first_sample(region, rate);
    const std::size_t last = region_last_sample(region, rate, buf.samples.size());
    const std::size_t n_win = last > first ? (last - first) / win_len : 0;
    if (n_win < 2) throw RegionTooShort("fingerprint needs at least two 0.1 s windows");

    std::vector<std::vector<double>> energy(n_win);
    for (std::size_t n = 0; n < n_win; ++n)
        energy[n] = band_energies(std::span(buf.samples.data() + first + n * win_len, win_len),
                                  rate);

    Fingerprint fp;
    fp.n_windows = n_win;
    fp.bits.assign(n_win - 1, std::vector<uint8_t>(kFingerprintBands - 1, 0));
    for (std::size_t n = 1; n < n_win; ++n) {
        for (int m = 0; m + 1 < kFingerprintBands; ++m) {
            const auto mm = static_cast<std::size_t>(m);
            const double d2 = (energy[n][mm] - energy[n][mm + 1]) -
                              (energy[n - 1][mm] - energy[n - 1][mm + 1]);
            fp.bits[n - 1][mm] = d2 > 0.0 ? 1 : 0;
        }
    }
    return fp;
}

double fingerprint_distance(const Fingerprint& a, const Fingerprint& b) {
    const std::size_t rows = std::min(a.bits.size(), b.bits.size());
    if (rows == 0) return 1.0;
    const std::size_t cols = std::min(a.bits[0].size(), b.bits[0].size());
    if (cols == 0) return 1.0;
    std::size_t diff = 0;
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            if (a.bits[r][c] != b.bits[r][c]) ++diff;
    return static_cast<double>(diff) / static_cast<double>(rows * cols);
}

double correlation_similarity(const AudioBuffer& buf, const Region& r1, const Region& r2) {
    if (r1.duration() < kMinCompareRegionSec || r2.duration() < kMinCompareRegionSec)
        throw RegionTooShort("correlation needs regions of at least 0.2 s");
    return correlation_from_windows(correlation_windows(buf, r1),
                                    correlation_windows(buf, r2));
}

std::vector<PairScore> compare_all(const AudioBuffer& buf, const RegionSet& set) {
    const auto& regions = set.regions;
    const std::size_t n = regions.size();
    std::vector<PairScore> pairs;
    if (n < 2) return pairs;

    // per-region caches; regions too short to compare get no cache entry
    std::vector<bool> usable(n, false);
    std::vector<Fingerprint> prints(n);
    std::vector<CorrelationWindows> windows(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (regions[i].duration() < kMinCompareRegionSec) continue;
        try {
            prints[i] = fingerprint(buf, regions[i]);
            windows[i] = correlation_windows(buf, regions[i]);
            usable[i] = true;
        } catch (const RegionTooShort&) {
            usable[i] = false;
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (overlapping(regions[i], regions[j])) continue;
            const double da = regions[i].duration();
            const double db = regions[j].duration();
            if (da <= 0.0 || db <= 0.0) continue;
            if (std::max(da, db) / std::min(da, db) > kMaxDurationRatio) continue;

            PairScore p;
            p.idx_a = i;
            p.idx_b = j;
            p.a_start = regions[i].start;
            p.a_end = regions[i].end;
            p.b_start = regions[j].start;
            p.b_end = regions[j].end;
            p.mean_energy = 0.5 * (regions[i].mean_energy + regions[j].mean_energy);
            if (usable[i] && usable[j]) {
                p.fp_distance = fingerprint_distance(prints[i], prints[j]);
                p.correlation = correlation_from_windows(windows[i], windows[j]);
                p.combined = pair_score(p.fp_distance, p.correlation);
            }
            pairs.push_back(p);
        }
    }
    return pairs;
}

void write_pairs_csv(const std::string& path, const std::vector<PairScore>& pairs) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot write " + path);
    f << "idx_a,idx_b,fp_distance,correlation,combined,mean_energy\n";
    f.precision(17);
    for (const PairScore& p : pairs)
        f << p.idx_a << ',' << p.idx_b << ',' << p.fp_distance << ',' << p.correlation << ','
          << p.combined << ',' << p.mean_energy << '\n';
    if (!f) throw IoError("short write to " + path);
}

}  // namespace repscore

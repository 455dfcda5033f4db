#include "repscore/features.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include "repscore/errors.hpp"
#include "repscore/fft.hpp"
#include "repscore/stft.hpp"

namespace repscore {

const std::array<const char*, kNumFeatures> kFeatureNames = {
    "mfcc_1",  "mfcc_2",  "mfcc_3",  "mfcc_4",  "mfcc_5",  "mfcc_6",  "mfcc_7",
    "mfcc_8",  "mfcc_9",  "mfcc_10", "mfcc_11", "mfcc_12", "mfcc_13", "zcr",
    "energy",  "energy_entropy", "spectral_centroid", "spectral_spread",
    "spectral_entropy", "spectral_flux", "spectral_rolloff", "f0", "harmonic_ratio",
    "mid_mfcc_1",  "mid_mfcc_2",  "mid_mfcc_3",  "mid_mfcc_4",  "mid_mfcc_5",
    "mid_mfcc_6",  "mid_mfcc_7",  "mid_mfcc_8",  "mid_mfcc_9",  "mid_mfcc_10",
    "mid_mfcc_11", "mid_mfcc_12", "mid_mfcc_13", "mid_zcr", "mid_energy",
    "mid_energy_entropy", "mid_spectral_centroid", "mid_spectral_spread",
    "mid_spectral_entropy", "mid_spectral_flux", "mid_spectral_rolloff",
    "mid_f0", "mid_harmonic_ratio"};

namespace {

constexpr int kNumMelFilters = 26;
constexpr int kNumMfcc = 13;
constexpr double kLogFloor = 1e-10;
constexpr double kRolloffFraction = 0.9;
constexpr int kEnergyEntropyBlocks = 10;

double hz_to_mel(double f) { return 2595.0 * std::log10(1.0 + f / 700.0); }
double mel_to_hz(double m) { return 700.0 * (std::pow(10.0, m / 2595.0) - 1.0); }

// Triangular mel filterbank over the one-sided power spectrum, cached per
// (sample_rate, n_bins).
struct MelBank {
    std::vector<std::vector<double>> weights;  // [filter][bin]
};

const MelBank& mel_bank(int sample_rate, std::size_t n_bins, std::size_t fft_len) {
    static MelBank bank;
    static int cached_rate = -1;
    static std::size_t cached_bins = 0;
    if (cached_rate == sample_rate && cached_bins == n_bins) return bank;

    bank.weights.assign(kNumMelFilters, std::vector<double>(n_bins, 0.0));
    const double mel_hi = hz_to_mel(sample_rate / 2.0);
    std::vector<double> edges(kNumMelFilters + 2);
    for (int i = 0; i < kNumMelFilters + 2; ++i)
        edges[static_cast<std::size_t>(i)] = mel_to_hz(mel_hi * i / (kNumMelFilters + 1));

    for (int m = 0; m < kNumMelFilters; ++m) {
        const double lo = edges[static_cast<std::size_t>(m)];
        const double mid = edges[static_cast<std::size_t>(m + 1)];
        const double hi = edges[static_cast<std::size_t>(m + 2)];
        for (std::size_t k = 0; k < n_bins; ++k) {
            const double f = static_cast<double>(k) * sample_rate / static_cast<double>(fft_len);
            double w = 0.0;
            if (f > lo && f < mid)
                w = (f - lo) / (mid - lo);
            else if (f >= mid && f < hi)
                w = (hi - f) / (hi - mid);
            bank.weights[static_cast<std::size_t>(m)][k] = w;
        }
    }
    cached_rate = sample_rate;
    cached_bins = n_bins;
    return bank;
}

void append_mfcc(const std::vector<double>& power_spectrum, int sample_rate,
                 std::size_t fft_len, std::array<double, kNumShortTermFeatures>& out) {
    const auto& bank = mel_bank(sample_rate, power_spectrum.size(), fft_len);
    std::array<double, kNumMelFilters> log_energy;
    for (int m = 0; m < kNumMelFilters; ++m) {
        double e = 0.0;
        const auto& w = bank.weights[static_cast<std::size_t>(m)];
        for (std::size_t k = 0; k < power_spectrum.size(); ++k) e += w[k] * power_spectrum[k];
        log_energy[static_cast<std::size_t>(m)] = std::log(std::max(e, kLogFloor));
    }
    // orthonormal DCT-II, keep coefficients 1..13 (drop the 0th)
    for (int c = 1; c <= kNumMfcc; ++c) {
        double acc = 0.0;
        for (int m = 0; m < kNumMelFilters; ++m)
            acc += log_energy[static_cast<std::size_t>(m)] *
                   std::cos(std::numbers::pi * c * (2.0 * m + 1.0) / (2.0 * kNumMelFilters));
        out[static_cast<std::size_t>(c - 1)] = acc * std::sqrt(2.0 / kNumMelFilters);
    }
}

// Normalized autocorrelation pitch: global peak over lags covering 60-1000 Hz.
void pitch_features(const std::vector<double>& frame, int sample_rate, double& f0,
                    double& harmonic_ratio) {
    const int n = static_cast<int>(frame.size());
    const int lag_min = std::max(2, sample_rate / 1000);
    const int lag_max = std::min(n - 2, sample_rate / 60);
    f0 = 0.0;
    harmonic_ratio = 0.0;
    if (lag_max <= lag_min) return;

    double best = 0.0;
    int best_lag = 0;
    for (int lag = lag_min; lag <= lag_max; ++lag) {
        double num = 0.0, e0 = 0.0, e1 = 0.0;
        for (int i = 0; i + lag < n; ++i) {
            num += frame[static_cast<std::size_t>(i)] * frame[static_cast<std::size_t>(i + lag)];
            e0 += frame[static_cast<std::size_t>(i)] * frame[static_cast<std::size_t>(i)];
            e1 += frame[static_cast<std::size_t>(i + lag)] * frame[static_cast<std::size_t>(i + lag)];
        }
        const double denom = std::sqrt(e0 * e1);
        if (denom <= 0.0) continue;
        const double r = num / denom;
        if (r > best) {
            best = r;
            best_lag = lag;
        }
    }
    if (best_lag > 0) {
        f0 = static_cast<double>(sample_rate) / best_lag;
        harmonic_ratio = std::clamp(best, 0.0, 1.0);
    }
}

}  // namespace

std::array<double, kNumShortTermFeatures> short_term_features(
    const std::vector<double>& frame, const std::vector<double>& prev_magnitude,
    int sample_rate, std::vector<double>* magnitude_out) {
    const std::size_t n = frame.size();
    std::array<double, kNumShortTermFeatures> out{};

    // time-domain features on the raw frame
    double energy = 0.0;
    std::size_t crossings = 0;
    for (std::size_t i = 0; i < n; ++i) {
        energy += frame[i] * frame[i];
        if (i > 0 && (frame[i] >= 0.0) != (frame[i - 1] >= 0.0)) ++crossings;
    }
    const double total_sq = energy;
    energy /= static_cast<double>(n);
    out[13] = n > 1 ? static_cast<double>(crossings) / static_cast<double>(n - 1) : 0.0;
    out[14] = energy;

    // energy entropy over sub-blocks
    {
        const std::size_t block = std::max<std::size_t>(1, n / kEnergyEntropyBlocks);
        double h = 0.0;
        if (total_sq > 0.0) {
            for (int b = 0; b < kEnergyEntropyBlocks; ++b) {
                const std::size_t lo = static_cast<std::size_t>(b) * block;
                const std::size_t hi = b == kEnergyEntropyBlocks - 1
                                           ? n
                                           : std::min(n, lo + block);
                double e = 0.0;
                for (std::size_t i = lo; i < hi; ++i) e += frame[i] * frame[i];
                const double p = e / total_sq;
                if (p > 0.0) h -= p * std::log2(p);
            }
        } else {
            h = std::log2(static_cast<double>(kEnergyEntropyBlocks));
        }
        out[15] = h;
    }

    // spectral features on the Hamming-weighted frame
    const auto win = make_window(WindowKind::Hamming, static_cast<int>(n));
    std::vector<double> windowed(n);
    for (std::size_t i = 0; i < n; ++i) windowed[i] = frame[i] * win[i];
    const auto spectrum = rfft(windowed);
    const std::size_t n_bins = spectrum.size();
    std::vector<double> magnitude(n_bins), power(n_bins);
    double mag_sum = 0.0, pow_sum = 0.0;
    for (std::size_t k = 0; k < n_bins; ++k) {
        magnitude[k] = std::abs(spectrum[k]);
        power[k] = magnitude[k] * magnitude[k];
        mag_sum += magnitude[k];
        pow_sum += power[k];
    }

    const double bin_hz = static_cast<double>(sample_rate) / static_cast<double>(n);
    double centroid = 0.0;
    if (mag_sum > 0.0) {
        for (std::size_t k = 0; k < n_bins; ++k)
            centroid += static_cast<double>(k) * bin_hz * magnitude[k];
        centroid /= mag_sum;
    }
    out[16] = centroid;

    double spread = 0.0;
    if (mag_sum > 0.0) {
        for (std::size_t k = 0; k < n_bins; ++k) {
            const double d = static_cast<double>(k) * bin_hz - centroid;
            spread += d * d * magnitude[k];
        }
        spread = std::sqrt(spread / mag_sum);
    }
    out[17] = spread;

    double spec_entropy = std::log2(static_cast<double>(n_bins));
    if (pow_sum > 0.0) {
        spec_entropy = 0.0;
        for (std::size_t k = 0; k < n_bins; ++k) {
            const double p = power[k] / pow_sum;
            if (p > 0.0) spec_entropy -= p * std::log2(p);
        }
    }
    out[18] = spec_entropy;

    double flux = 0.0;
    for (std::size_t k = 0; k < n_bins; ++k) {
        const double prev = k < prev_magnitude.size() ? prev_magnitude[k] : 0.0;
        const double d = magnitude[k] - prev;
        flux += d * d;
    }
    out[19] = std::sqrt(flux) / static_cast<double>(n_bins);

    double rolloff = 0.0;
    if (pow_sum > 0.0) {
        double cum = 0.0;
        for (std::size_t k = 0; k < n_bins; ++k) {
            cum += power[k];
            if (cum >= kRolloffFraction * pow_sum) {
                rolloff = static_cast<double>(k) * bin_hz;
                break;
            }
        }
    }
    out[20] = rolloff;

    pitch_features(frame, sample_rate, out[21], out[22]);
    append_mfcc(power, sample_rate, n, out);

    if (magnitude_out != nullptr) *magnitude_out = std::move(magnitude);
    return out;
}

FeatureMatrix extract_features(const AudioBuffer& buf) {
    const int rate = buf.sample_rate;
    const std::size_t flen = static_cast<std::size_t>(std::lround(kShortFrameSec * rate));
    const std::size_t hop = static_cast<std::size_t>(std::lround(kShortHopSec * rate));
    const std::size_t mid_len = static_cast<std::size_t>(std::lround(kMidFrameSec * rate));
    const std::size_t mid_hop = static_cast<std::size_t>(std::lround(kMidHopSec * rate));
    if (buf.samples.size() < mid_len)
        throw BufferTooShort("extract_features needs at least 0.3 s of audio");

    const std::size_t n_frames = (buf.samples.size() - flen) / hop + 1;
    std::vector<std::array<double, kNumShortTermFeatures>> short_rows(n_frames);
    std::vector<double> prev_mag, mag;
    std::vector<double> frame(flen);
    for (std::size_t l = 0; l < n_frames; ++l) {
        std::copy_n(buf.samples.begin() + static_cast<std::ptrdiff_t>(l * hop), flen,
                    frame.begin());
        short_rows[l] = short_term_features(frame, prev_mag, rate, &mag);
        prev_mag = std::move(mag);
    }

    // mid-term means; the last mid window absorbs frames past its nominal span
    const std::size_t n_mid = (buf.samples.size() - mid_len) / mid_hop + 1;
    std::vector<std::array<double, kNumShortTermFeatures>> mid_rows(
        n_mid, std::array<double, kNumShortTermFeatures>{});
    std::vector<std::size_t> mid_counts(n_mid, 0);
    for (std::size_t j = 0; j < n_mid; ++j) {
        const std::size_t w0 = j * mid_hop;
        const std::size_t l_lo = (w0 + hop - 1) / hop;
        const std::size_t l_hi = std::min(n_frames, (w0 + mid_len + hop - 1) / hop);
        for (std::size_t l = l_lo; l < l_hi; ++l) {
            for (int c = 0; c < kNumShortTermFeatures; ++c)
                mid_rows[j][static_cast<std::size_t>(c)] +=
                    short_rows[l][static_cast<std::size_t>(c)];
            ++mid_counts[j];
        }
    }
    for (std::size_t j = 0; j < n_mid; ++j)
        if (mid_counts[j] > 0)
            for (int c = 0; c < kNumShortTermFeatures; ++c)
                mid_rows[j][static_cast<std::size_t>(c)] /= static_cast<double>(mid_counts[j]);

    FeatureMatrix result;
    result.rows.resize(n_frames);
    result.frame_times.resize(n_frames);
    for (std::size_t l = 0; l < n_frames; ++l) {
        const std::size_t start = l * hop;
        const std::size_t j = std::min(start / mid_hop, n_mid - 1);
        for (int c = 0; c < kNumShortTermFeatures; ++c) {
            result.rows[l][static_cast<std::size_t>(c)] = short_rows[l][static_cast<std::size_t>(c)];
            result.rows[l][static_cast<std::size_t>(c + kNumShortTermFeatures)] =
                mid_rows[j][static_cast<std::size_t>(c)];
        }
        result.frame_times[l] = static_cast<double>(start) / rate;
    }
    return result;
}

void write_features_csv(const std::string& path, const FeatureMatrix& features) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot write " + path);
    f << "time";
    for (const char* name : kFeatureNames) f << ',' << name;
    f << '\n';
    f.precision(17);
    for (std::size_t i = 0; i < features.n_rows(); ++i) {
        f << features.frame_times[i];
        for (double v : features.rows[i]) f << ',' << v;
        f << '\n';
    }
    if (!f) throw IoError("short write to " + path);
}

}  // namespace repscore

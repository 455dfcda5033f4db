#include "repscore/denoise.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "repscore/errors.hpp"
#include "repscore/stft.hpp"

namespace repscore {
namespace {

constexpr double kXiMin = 0.0031622776601683794;  // 10^(-25/10)
constexpr double kPsdFloor = 1e-12;
constexpr double kAlphaS = 0.8;      // periodogram time smoothing
constexpr double kAlphaP = 0.2;      // presence indicator smoothing
constexpr double kPresenceDelta = 5.0;  // S/Smin ratio marking likely speech
constexpr int kNumSubwindows = 5;

// q(k,l) heuristic: the smoothed a priori SNR zeta is mapped to a speech
// likelihood on a log scale between these two levels, locally per bin and
// globally per frame; q = 1 - P_local * P_global, clamped at q_max.
constexpr double kZetaLo = 0.1;       // -10 dB
constexpr double kZetaHi = 0.31622776601683794;  // -5 dB

double snr_likelihood(double zeta) {
    if (zeta <= kZetaLo) return 0.0;
    if (zeta >= kZetaHi) return 1.0;
    return std::log(zeta / kZetaLo) / std::log(kZetaHi / kZetaLo);
}

double e1_series(double v) {
    constexpr double kEulerGamma = 0.5772156649015329;
    double sum = 0.0;
    double term = 1.0;
    for (int n = 1; n <= 40; ++n) {
        term *= -v / n;
        const double add = -term / n;
        sum += add;
        if (std::fabs(add) < 1e-12 * std::fabs(sum)) break;
    }
    return -kEulerGamma - std::log(v) + sum;
}

double e1_contfrac(double v) {
    // modified Lentz evaluation of E1(v) = exp(-v) / (v + 1 - 1/(v + 3 - 4/(...)))
    constexpr double kTiny = 1e-300;
    double b = v + 1.0;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 120; ++i) {
        const double a = -static_cast<double>(i) * i;
        b += 2.0;
        d = a * d + b;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = b + a / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double delta = c * d;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-10) break;
    }
    return h * std::exp(-v);
}

}  // namespace

double expint_e1(double v) {
    if (v <= 0.0) throw std::invalid_argument("expint_e1: v must be positive");
    if (v > 700.0) return 0.0;
    return v < 1.0 ? e1_series(v) : e1_contfrac(v);
}

void DenoiserState::init(std::size_t n_bins, const DenoiserParams& params) {
    lambda_d.assign(n_bins, kPsdFloor);
    xi_hat.assign(n_bins, 0.0);
    gamma_prev.assign(n_bins, 0.0);
    gain_prev.assign(n_bins, 0.0);
    p.assign(n_bins, 0.0);
    q.assign(n_bins, params.q_max);
    energy_minimum.assign(n_bins, 0.0);
    smoothed_power.assign(n_bins, 0.0);
    min_current.assign(n_bins, 0.0);
    min_ring.assign(kNumSubwindows, std::vector<double>());
    presence_smooth.assign(n_bins, 0.0);
    zeta.assign(n_bins, 0.0);
    frame_count = 0;
    ring_pos = 0;
}

void update_noise_psd(DenoiserState& state, const std::vector<double>& frame_power,
                      const DenoiserParams& params) {
    const std::size_t n = frame_power.size();
    if (state.lambda_d.size() != n) state.init(n, params);
    const int subwin = std::max(1, params.minima_window / kNumSubwindows);

    for (std::size_t k = 0; k < n; ++k) {
        // frequency smoothing over three neighboring bins
        double sf = 0.5 * frame_power[k];
        double wsum = 0.5;
        if (k > 0) { sf += 0.25 * frame_power[k - 1]; wsum += 0.25; }
        if (k + 1 < n) { sf += 0.25 * frame_power[k + 1]; wsum += 0.25; }
        sf /= wsum;

        const double s = state.frame_count == 0
                             ? sf
                             : kAlphaS * state.smoothed_power[k] + (1.0 - kAlphaS) * sf;
        state.smoothed_power[k] = s;
        state.min_current[k] =
            (state.frame_count % subwin == 0) ? s : std::min(state.min_current[k], s);
    }

    // close the subwindow and refresh the tracked minimum
    if ((state.frame_count + 1) % subwin == 0) {
        state.min_ring[state.ring_pos] = state.min_current;
        state.ring_pos = (state.ring_pos + 1) % kNumSubwindows;
    }
    for (std::size_t k = 0; k < n; ++k) {
        double m = state.min_current[k];
        for (const auto& ring : state.min_ring)
            if (!ring.empty()) m = std::min(m, ring[k]);
        state.energy_minimum[k] = m;
    }

    const bool warmup = state.frame_count < static_cast<std::size_t>(params.minima_window);
    for (std::size_t k = 0; k < n; ++k) {
        const double ratio =
            state.smoothed_power[k] / std::max(state.energy_minimum[k], kPsdFloor);
        const double indicator = ratio > kPresenceDelta ? 1.0 : 0.0;
        state.presence_smooth[k] =
            (1.0 - kAlphaP) * state.presence_smooth[k] + kAlphaP * indicator;

        if (warmup) {
            // running mean until the minimum tracker has data
            const double count = static_cast<double>(state.frame_count + 1);
            state.lambda_d[k] += (frame_power[k] - state.lambda_d[k]) / count;
        } else {
            const double ad =
                params.alpha_d + (1.0 - params.alpha_d) * state.presence_smooth[k];
            state.lambda_d[k] = ad * state.lambda_d[k] + (1.0 - ad) * frame_power[k];
            // minima-controlled floor: the noise estimate may not drop below
            // the tracked minimum of the smoothed periodogram
            state.lambda_d[k] = std::max(state.lambda_d[k], state.energy_minimum[k]);
        }
        state.lambda_d[k] = std::max(state.lambda_d[k], kPsdFloor);
    }
    ++state.frame_count;
}

std::vector<double> posteriori_snr(const std::vector<double>& frame_power,
                                   const std::vector<double>& lambda_d) {
    if (frame_power.size() != lambda_d.size())
        throw DimensionMismatch("posteriori_snr: bin count");
    std::vector<double> gamma(frame_power.size());
    for (std::size_t k = 0; k < gamma.size(); ++k) {
        if (lambda_d[k] <= 0.0) throw std::invalid_argument("posteriori_snr: lambda_d <= 0");
        gamma[k] = frame_power[k] / lambda_d[k];
    }
    return gamma;
}

std::vector<double> priori_snr(const DenoiserState& state, const std::vector<double>& gamma,
                               double alpha) {
    const std::size_t n = gamma.size();
    const bool has_history = state.gain_prev.size() == n && state.frame_count > 0;
    std::vector<double> xi(n);
    for (std::size_t k = 0; k < n; ++k) {
        double history = 0.0;
        if (has_history)
            history = state.gain_prev[k] * state.gain_prev[k] * state.gamma_prev[k];
        const double instant = std::max(gamma[k] - 1.0, 0.0);
        xi[k] = std::max(alpha * history + (1.0 - alpha) * instant, kXiMin);
    }
    return xi;
}

std::vector<double> spectral_gain(const std::vector<double>& xi, const std::vector<double>& gamma,
                                  const std::vector<double>& p, double g_min) {
    if (xi.size() != gamma.size() || xi.size() != p.size())
        throw DimensionMismatch("spectral_gain: bin count");
    std::vector<double> gain(xi.size());
    for (std::size_t k = 0; k < xi.size(); ++k) {
        const double v = std::max(gamma[k] * xi[k] / (1.0 + xi[k]), 1e-10);
        double g_h1 = xi[k] / (1.0 + xi[k]) * std::exp(0.5 * expint_e1(v));
        g_h1 = std::min(g_h1, 1.0);
        const double g = std::pow(g_h1, p[k]) * std::pow(g_min, 1.0 - p[k]);
        gain[k] = std::clamp(g, g_min, 1.0);
    }
    return gain;
}

AudioBuffer omlsa_pass(const AudioBuffer& buf, const DenoiserParams& params) {
    const std::size_t len = buf.samples.size();
    if (len < static_cast<std::size_t>(params.frame_len))
        throw BufferTooShort("omlsa_pass needs at least one frame");

    // pad so the frame grid covers the whole signal
    AudioBuffer padded = buf;
    const std::size_t hop = static_cast<std::size_t>(params.hop);
    const std::size_t flen = static_cast<std::size_t>(params.frame_len);
    const std::size_t n_hops = (len - flen + hop - 1) / hop;
    padded.samples.resize(n_hops * hop + flen, 0.0);

    Spectrogram spec = stft(padded, params.frame_len, params.hop, WindowKind::Hamming);
    const std::size_t n_bins = spec.n_bins();

    DenoiserState state;
    state.init(n_bins, params);

    std::vector<double> power(n_bins);
    for (auto& frame : spec.frames) {
        for (std::size_t k = 0; k < n_bins; ++k) power[k] = std::norm(frame[k]);

        update_noise_psd(state, power, params);
        auto gamma = posteriori_snr(power, state.lambda_d);
        auto xi = priori_snr(state, gamma, params.alpha);

        // a priori speech absence from the smoothed local/global SNR test
        double zeta_sum = 0.0;
        for (std::size_t k = 0; k < n_bins; ++k) {
            state.zeta[k] = state.frame_count <= 1
                                ? xi[k]
                                : 0.7 * state.zeta[k] + 0.3 * xi[k];
            zeta_sum += state.zeta[k];
        }
        const double p_global = snr_likelihood(zeta_sum / static_cast<double>(n_bins));
        for (std::size_t k = 0; k < n_bins; ++k) {
            const double p_local = snr_likelihood(state.zeta[k]);
            state.q[k] = std::clamp(1.0 - p_local * p_global, 0.0, params.q_max);
        }

        for (std::size_t k = 0; k < n_bins; ++k) {
            const double v = std::max(gamma[k] * xi[k] / (1.0 + xi[k]), 1e-10);
            if (state.q[k] <= 0.0) {
                state.p[k] = 1.0;
            } else {
                const double odds =
                    state.q[k] / (1.0 - state.q[k]) * (1.0 + xi[k]) * std::exp(-v);
                state.p[k] = 1.0 / (1.0 + odds);
            }
        }

        auto gain = spectral_gain(xi, gamma, state.p, params.g_min);
        for (std::size_t k = 0; k < n_bins; ++k) {
            // carry G_H1 (not the combined gain) into the next decision-directed step
            const double v = std::max(gamma[k] * xi[k] / (1.0 + xi[k]), 1e-10);
            double g_h1 = xi[k] / (1.0 + xi[k]) * std::exp(0.5 * expint_e1(v));
            state.gain_prev[k] = std::min(g_h1, 1.0);
            state.gamma_prev[k] = gamma[k];
            state.xi_hat[k] = xi[k];
            frame[k] *= gain[k];
        }
    }

    AudioBuffer out = istft(spec);
    out.samples.resize(len);
    out.sample_rate = buf.sample_rate;
    out.bandpassed = buf.bandpassed;
    return out;
}

AudioBuffer denoise(const AudioBuffer& buf, const DenoiserParams& params) {
    if (params.passes < 1) throw std::invalid_argument("denoise: passes must be >= 1");
    AudioBuffer out = buf;
    for (int i = 0; i < params.passes; ++i) out = omlsa_pass(out, params);
    return out;
}

}  // namespace repscore

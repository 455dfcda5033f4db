#pragma once

#include <cstddef>
#include <vector>

#include "repscore/audio.hpp"

namespace repscore {

struct DenoiserParams {
    double alpha = 0.92;         // a priori SNR smoothing weight, in (0,1)
    double g_min = 0.05623413251903491;  // 10^(-25/20), gain floor
    int frame_len = 512;
    int hop = 256;
    double alpha_d = 0.95;       // noise PSD smoothing base, in (0,1)
    int minima_window = 50;      // frames spanned by the minimum tracker
    double q_max = 0.95;         // upper clamp for a priori speech absence
    int passes = 3;
};

/// Per-stream recursive estimates, one entry per frequency bin.
struct DenoiserState {
    std::vector<double> lambda_d;        // noise PSD
    std::vector<double> xi_hat;          // a priori SNR
    std::vector<double> gamma_prev;      // previous a posteriori SNR
    std::vector<double> gain_prev;       // previous G_H1
    std::vector<double> p;               // speech presence probability
    std::vector<double> q;               // a priori speech absence probability
    std::vector<double> energy_minimum;  // tracked minimum of smoothed periodogram

    // internals of the minimum tracker / presence smoother
    std::vector<double> smoothed_power;
    std::vector<double> min_current;             // running min of the open subwindow
    std::vector<std::vector<double>> min_ring;   // completed subwindow minima
    std::vector<double> presence_smooth;         // p-tilde used by the noise update
    std::vector<double> zeta;                    // smoothed xi for the q estimate
    std::size_t frame_count = 0;
    std::size_t ring_pos = 0;

    void init(std::size_t n_bins, const DenoiserParams& params);
};

/// MCRA noise PSD update for one frame of |Y|^2 values.
void update_noise_psd(DenoiserState& state, const std::vector<double>& frame_power,
                      const DenoiserParams& params);

/// gamma = |Y|^2 / lambda_d, elementwise.
std::vector<double> posteriori_snr(const std::vector<double>& frame_power,
                                   const std::vector<double>& lambda_d);

/// Decision-directed a priori SNR estimate; uses the previous gain and
/// gamma held in the state, clamps below at 10^(-25/10).
std::vector<double> priori_snr(const DenoiserState& state, const std::vector<double>& gamma,
                               double alpha);

/// OM-LSA gain: G = G_H1^p * g_min^(1-p), G_H1 from the LSA estimator.
/// Result clamped to [g_min, 1].
std::vector<double> spectral_gain(const std::vector<double>& xi, const std::vector<double>& gamma,
                                  const std::vector<double>& p, double g_min);

/// Exponential integral E1(v), v > 0. Series for v < 1, continued fraction
/// otherwise; relative error < 1e-6.
double expint_e1(double v);

/// One full analysis/update/gain/synthesis pass.
AudioBuffer omlsa_pass(const AudioBuffer& buf, const DenoiserParams& params);

/// omlsa_pass composed `passes` times.
AudioBuffer denoise(const AudioBuffer& buf, const DenoiserParams& params);

}  // namespace repscore

#include "repscore/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace repscore {
namespace {

// Plans are cached per transform size. FFTW plan creation is not thread-safe;
// execution via the new-array interface is, as long as alignment matches the
// arrays the plan was created with (we always use fftw_malloc).
std::mutex g_plan_mutex;

struct R2cPlan {
    fftw_plan plan = nullptr;
};
struct C2rPlan {
    fftw_plan plan = nullptr;
};

fftw_plan r2c_plan(std::size_t n) {
    static std::unordered_map<std::size_t, R2cPlan> cache;
    std::lock_guard lock(g_plan_mutex);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second.plan;
    double* in = fftw_alloc_real(n);
    fftw_complex* out = fftw_alloc_complex(n / 2 + 1);
    fftw_plan p = fftw_plan_dft_r2c_1d(static_cast<int>(n), in, out, FFTW_ESTIMATE);
    fftw_free(in);
    fftw_free(out);
    cache[n] = {p};
    return p;
}

fftw_plan c2r_plan(std::size_t n) {
    static std::unordered_map<std::size_t, C2rPlan> cache;
    std::lock_guard lock(g_plan_mutex);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second.plan;
    fftw_complex* in = fftw_alloc_complex(n / 2 + 1);
    double* out = fftw_alloc_real(n);
    fftw_plan p = fftw_plan_dft_c2r_1d(static_cast<int>(n), in, out, FFTW_ESTIMATE);
    fftw_free(in);
    fftw_free(out);
    cache[n] = {p};
    return p;
}

}  // namespace

std::vector<std::complex<double>> rfft(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n == 0) throw std::invalid_argument("rfft: empty input");
    fftw_plan plan = r2c_plan(n);
    double* in = fftw_alloc_real(n);
    fftw_complex* out = fftw_alloc_complex(n / 2 + 1);
    std::memcpy(in, x.data(), n * sizeof(double));
    fftw_execute_dft_r2c(plan, in, out);
    std::vector<std::complex<double>> result(n / 2 + 1);
    for (std::size_t k = 0; k < result.size(); ++k) result[k] = {out[k][0], out[k][1]};
    fftw_free(in);
    fftw_free(out);
    return result;
}

std::vector<double> irfft(std::span<const std::complex<double>> spectrum, std::size_t n) {
    if (n == 0) throw std::invalid_argument("irfft: zero length");
    if (spectrum.size() != n / 2 + 1)
        throw std::invalid_argument("irfft: spectrum size does not match n");
    fftw_plan plan = c2r_plan(n);
    fftw_complex* in = fftw_alloc_complex(n / 2 + 1);
    double* out = fftw_alloc_real(n);
    for (std::size_t k = 0; k < spectrum.size(); ++k) {
        in[k][0] = spectrum[k].real();
        in[k][1] = spectrum[k].imag();
    }
    fftw_execute_dft_c2r(plan, in, out);
    std::vector<double> result(n);
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) result[i] = out[i] * scale;
    fftw_free(in);
    fftw_free(out);
    return result;
}

}  // namespace repscore

#include "qmoire/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace qmoire::detail {

namespace {

// FFTW planning is not thread-safe; execution of a private plan is.
std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

void transform(std::vector<std::complex<double>>& data, int sign) {
    if (data.empty()) throw std::invalid_argument("fft: empty input");
    auto* p = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(plan_mutex());
        plan = fftw_plan_dft_1d(static_cast<int>(data.size()), p, p, sign, FFTW_ESTIMATE);
    }
    if (!plan) throw std::runtime_error("fft: planning failed");
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(plan_mutex());
        fftw_destroy_plan(plan);
    }
}

}  // namespace

void fft_forward(std::vector<std::complex<double>>& data) { transform(data, FFTW_FORWARD); }

void fft_inverse(std::vector<std::complex<double>>& data) {
    transform(data, FFTW_BACKWARD);
    double inv = 1.0 / static_cast<double>(data.size());
    for (auto& v : data) v *= inv;
}

std::vector<double> fft_frequencies(std::size_t n, double pitch) {
    std::vector<double> f(n);
    double df = 1.0 / (static_cast<double>(n) * pitch);
    for (std::size_t k = 0; k < n; ++k) {
        auto sk = static_cast<std::ptrdiff_t>(k);
        auto half = static_cast<std::ptrdiff_t>((n + 1) / 2);
        f[k] = df * static_cast<double>(sk < half ? sk : sk - static_cast<std::ptrdiff_t>(n));
    }
    return f;
}

}  // namespace qmoire::detail

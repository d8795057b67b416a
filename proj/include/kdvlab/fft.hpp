#pragma once

// Thin wrapper around FFTW complex transforms with a mutex-guarded plan
// cache. Plan creation is serialized; execution uses the new-array API so
// concurrent callers on distinct buffers are safe.

#include <complex>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

#include <fftw3.h>

namespace kdvlab::fft {

namespace detail {

struct PlanPair {
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
};

inline std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

inline PlanPair& plans_for(int n) {
    static std::map<int, PlanPair> cache;
    std::lock_guard<std::mutex> lock(plan_mutex());
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    std::vector<std::complex<double>> buf(static_cast<size_t>(n));
    auto* p = reinterpret_cast<fftw_complex*>(buf.data());
    PlanPair pp;
    // FFTW_UNALIGNED: plans must work with any caller-provided buffer.
    pp.forward = fftw_plan_dft_1d(n, p, p, FFTW_FORWARD,
                                  FFTW_ESTIMATE | FFTW_UNALIGNED);
    pp.backward = fftw_plan_dft_1d(n, p, p, FFTW_BACKWARD,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!pp.forward || !pp.backward)
        throw std::runtime_error("fftw plan creation failed for n=" +
                                 std::to_string(n));
    return cache.emplace(n, pp).first->second;
}

}  // namespace detail

/// In-place unnormalized DFT, sign convention e^{-2*pi*i*jk/n}.
inline void forward(std::vector<std::complex<double>>& data) {
    auto& pp = detail::plans_for(static_cast<int>(data.size()));
    auto* p = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(pp.forward, p, p);
}

/// In-place unnormalized inverse DFT, sign convention e^{+2*pi*i*jk/n}.
inline void backward(std::vector<std::complex<double>>& data) {
    auto& pp = detail::plans_for(static_cast<int>(data.size()));
    auto* p = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(pp.backward, p, p);
}

}  // namespace kdvlab::fft

#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

namespace dsasim {

using Cplx = std::complex<double>;

inline bool is_power_of_two(std::size_t n) {
    return n != 0 && (n & (n - 1)) == 0;
}

// In-place radix-2 transform with unitary scaling (1/sqrt(N) in both
// directions), so Parseval holds without bookkeeping: white noise keeps its
// per-sample variance per bin and a unit-power tone set stays unit power.
inline void fft_unitary(std::vector<Cplx>& data, bool inverse) {
    const std::size_t n = data.size();
    if (!is_power_of_two(n)) {
        throw std::invalid_argument("fft size must be a power of two, got " + std::to_string(n));
    }
    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) {
            j ^= bit;
        }
        j ^= bit;
        if (i < j) {
            std::swap(data[i], data[j]);
        }
    }
    const double sign = inverse ? 1.0 : -1.0;
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double angle = sign * 2.0 * M_PI / static_cast<double>(len);
        const Cplx wlen(std::cos(angle), std::sin(angle));
        for (std::size_t i = 0; i < n; i += len) {
            Cplx w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                Cplx u = data[i + k];
                Cplx v = data[i + k + len / 2] * w;
                data[i + k] = u + v;
                data[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (auto& x : data) {
        x *= scale;
    }
}

inline std::vector<Cplx> fft(std::vector<Cplx> data) {
    fft_unitary(data, false);
    return data;
}

inline std::vector<Cplx> ifft(std::vector<Cplx> data) {
    fft_unitary(data, true);
    return data;
}

}  // namespace dsasim

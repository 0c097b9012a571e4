#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "dsasim/fft.hpp"
#include "dsasim/rng.hpp"
#include "dsasim/units.hpp"

namespace dsasim {

// Baseband chain: random bits -> Gray-coded 16-QAM -> OFDM with cyclic
// prefix, and the matching receive side plus the link-quality measurements
// (RSS, BER, BLER, PSD). 0 dB is one unit-average-power constellation point
// per occupied tone at unit gain; the noise floor is expressed on the same
// scale.

struct OfdmConfig {
    int fft_size = 512;
    int occupied_tones = 200;
    int cp_len = 128;
    static constexpr int bits_per_symbol = 4;  // 16-QAM

    int symbol_len() const { return fft_size + cp_len; }
    int bits_per_ofdm_symbol() const { return occupied_tones * bits_per_symbol; }

    void validate() const {
        if (fft_size <= 0 || !is_power_of_two(static_cast<std::size_t>(fft_size))) {
            throw std::invalid_argument("fft_size must be a positive power of two, got " +
                                        std::to_string(fft_size));
        }
        if (occupied_tones <= 0 || occupied_tones >= fft_size) {
            throw std::invalid_argument("occupied_tones must be in (0, fft_size)");
        }
        if (occupied_tones % 2 != 0) {
            throw std::invalid_argument("occupied_tones must be even, got " +
                                        std::to_string(occupied_tones));
        }
        if (cp_len < 0 || cp_len >= fft_size) {
            throw std::invalid_argument("cp_len must be in [0, fft_size)");
        }
    }
};

struct BitBlock {
    std::vector<std::uint8_t> bits;
    std::uint64_t seed = 0;
};

struct IqFrame {
    std::vector<Cplx> samples;
    double sample_rate_hz = 10e6;
    int symbols_contained = 0;
};

struct LinkMetrics {
    double rss_db = 0.0;
    double ber = 0.0;
    double bler = 0.0;
    double snr_db = 0.0;
};

inline BitBlock generate_bits(std::size_t count, std::uint64_t seed) {
    if (count == 0) {
        throw std::invalid_argument("bit count must be positive");
    }
    BitBlock block;
    block.seed = seed;
    block.bits.reserve(count);
    Rng rng(seed);
    for (std::size_t i = 0; i < count; ++i) {
        block.bits.push_back(rng.bit() ? 1 : 0);
    }
    return block;
}

namespace detail {

// Per-axis Gray map 00,01,11,10 -> -3,-1,+1,+3 scaled to unit average
// symbol energy ((1+9)/10 per axis, two axes).
inline constexpr double kQamScale = 0.31622776601683794;  // 1/sqrt(10)

inline double qam16_axis_level(std::uint8_t b_outer, std::uint8_t b_inner) {
    double magnitude = b_inner ? 1.0 : 3.0;
    double sign = b_outer ? 1.0 : -1.0;
    return sign * magnitude * kQamScale;
}

// Hard decision boundaries at -2a, 0, +2a; points exactly on a boundary take
// the lexicographically smaller bit pattern.
inline void qam16_axis_bits(double r, std::uint8_t& b_outer, std::uint8_t& b_inner) {
    const double threshold = 2.0 * kQamScale;
    if (r <= -threshold) {
        b_outer = 0;
        b_inner = 0;
    } else if (r <= 0.0) {
        b_outer = 0;
        b_inner = 1;
    } else if (r < threshold) {
        b_outer = 1;
        b_inner = 1;
    } else {
        b_outer = 1;
        b_inner = 0;
    }
}

}  // namespace detail

inline std::vector<Cplx> qam16_modulate(const BitBlock& block) {
    if (block.bits.size() % 4 != 0) {
        throw std::invalid_argument("bit count must be divisible by 4 for 16-QAM");
    }
    std::vector<Cplx> symbols;
    symbols.reserve(block.bits.size() / 4);
    for (std::size_t i = 0; i < block.bits.size(); i += 4) {
        double re = detail::qam16_axis_level(block.bits[i], block.bits[i + 1]);
        double im = detail::qam16_axis_level(block.bits[i + 2], block.bits[i + 3]);
        symbols.emplace_back(re, im);
    }
    return symbols;
}

inline BitBlock qam16_demodulate(const std::vector<Cplx>& symbols) {
    BitBlock block;
    block.bits.reserve(symbols.size() * 4);
    for (const Cplx& s : symbols) {
        std::uint8_t b0, b1, b2, b3;
        detail::qam16_axis_bits(s.real(), b0, b1);
        detail::qam16_axis_bits(s.imag(), b2, b3);
        block.bits.push_back(b0);
        block.bits.push_back(b1);
        block.bits.push_back(b2);
        block.bits.push_back(b3);
    }
    return block;
}

namespace detail {

// Occupied subcarriers in ascending index order -occ/2..-1, +1..+occ/2;
// DC stays empty. Negative indices wrap to the top FFT bins.
inline int tone_to_bin(int tone_slot, const OfdmConfig& cfg) {
    int half = cfg.occupied_tones / 2;
    int k = tone_slot < half ? tone_slot - half : tone_slot - half + 1;
    return k >= 0 ? k : cfg.fft_size + k;
}

}  // namespace detail

inline IqFrame ofdm_modulate(const std::vector<Cplx>& symbols, const OfdmConfig& cfg) {
    cfg.validate();
    if (symbols.empty() || symbols.size() % static_cast<std::size_t>(cfg.occupied_tones) != 0) {
        throw std::invalid_argument("symbol count must be a positive multiple of occupied_tones");
    }
    const int num_ofdm_symbols = static_cast<int>(symbols.size()) / cfg.occupied_tones;
    IqFrame frame;
    frame.symbols_contained = num_ofdm_symbols;
    frame.samples.reserve(static_cast<std::size_t>(num_ofdm_symbols) * cfg.symbol_len());
    std::vector<Cplx> bins(static_cast<std::size_t>(cfg.fft_size));
    for (int s = 0; s < num_ofdm_symbols; ++s) {
        std::fill(bins.begin(), bins.end(), Cplx{0.0, 0.0});
        for (int j = 0; j < cfg.occupied_tones; ++j) {
            bins[static_cast<std::size_t>(detail::tone_to_bin(j, cfg))] =
                symbols[static_cast<std::size_t>(s) * cfg.occupied_tones + j];
        }
        fft_unitary(bins, true);
        // cyclic prefix: last cp_len samples first
        for (int n = cfg.fft_size - cfg.cp_len; n < cfg.fft_size; ++n) {
            frame.samples.push_back(bins[static_cast<std::size_t>(n)]);
        }
        frame.samples.insert(frame.samples.end(), bins.begin(), bins.end());
    }
    return frame;
}

inline std::vector<Cplx> ofdm_demodulate(const IqFrame& frame, const OfdmConfig& cfg) {
    cfg.validate();
    const std::size_t symbol_len = static_cast<std::size_t>(cfg.symbol_len());
    if (frame.samples.empty() || frame.samples.size() % symbol_len != 0) {
        throw std::invalid_argument("frame length must be a positive multiple of fft_size + cp_len");
    }
    const std::size_t num_ofdm_symbols = frame.samples.size() / symbol_len;
    std::vector<Cplx> symbols;
    symbols.reserve(num_ofdm_symbols * static_cast<std::size_t>(cfg.occupied_tones));
    std::vector<Cplx> bins(static_cast<std::size_t>(cfg.fft_size));
    for (std::size_t s = 0; s < num_ofdm_symbols; ++s) {
        const Cplx* start = frame.samples.data() + s * symbol_len + cfg.cp_len;
        bins.assign(start, start + cfg.fft_size);
        fft_unitary(bins, false);
        for (int j = 0; j < cfg.occupied_tones; ++j) {
            symbols.push_back(bins[static_cast<std::size_t>(detail::tone_to_bin(j, cfg))]);
        }
    }
    return symbols;
}

// Mean per-occupied-tone power across the frame, in dB.
inline double measure_rss(const IqFrame& frame, const OfdmConfig& cfg) {
    std::vector<Cplx> tones = ofdm_demodulate(frame, cfg);
    double sum = 0.0;
    for (const Cplx& t : tones) {
        sum += std::norm(t);
    }
    return power_to_db(sum / static_cast<double>(tones.size()));
}

inline double compute_ber(const BitBlock& tx, const BitBlock& rx) {
    if (tx.bits.size() != rx.bits.size() || tx.bits.empty()) {
        throw std::invalid_argument("bit blocks must be non-empty and equal length");
    }
    std::size_t errors = 0;
    for (std::size_t i = 0; i < tx.bits.size(); ++i) {
        errors += tx.bits[i] != rx.bits[i] ? 1u : 0u;
    }
    return static_cast<double>(errors) / static_cast<double>(tx.bits.size());
}

inline double compute_bler(const BitBlock& tx, const BitBlock& rx, std::size_t block_bits) {
    if (tx.bits.size() != rx.bits.size() || tx.bits.empty()) {
        throw std::invalid_argument("bit blocks must be non-empty and equal length");
    }
    if (block_bits == 0 || tx.bits.size() % block_bits != 0) {
        throw std::invalid_argument("bit count must be a positive multiple of block_bits");
    }
    const std::size_t blocks = tx.bits.size() / block_bits;
    std::size_t bad = 0;
    for (std::size_t b = 0; b < blocks; ++b) {
        for (std::size_t i = b * block_bits; i < (b + 1) * block_bits; ++i) {
            if (tx.bits[i] != rx.bits[i]) {
                ++bad;
                break;
            }
        }
    }
    return static_cast<double>(bad) / static_cast<double>(blocks);
}

// Circularly-symmetric white noise, `variance` = E|n|^2 per sample.
inline void add_awgn(IqFrame& frame, double variance, Rng& rng) {
    if (variance < 0.0) {
        throw std::invalid_argument("noise variance must be non-negative");
    }
    if (variance == 0.0) {
        return;
    }
    const double sigma_axis = std::sqrt(variance / 2.0);
    for (Cplx& s : frame.samples) {
        s += Cplx(sigma_axis * rng.gaussian(), sigma_axis * rng.gaussian());
    }
}

struct PsdBin {
    double freq_hz = 0.0;
    double psd_db = 0.0;
};

// Welch periodogram: Hann window, 50% overlap, per-bin power normalized so
// white noise of variance v reads v in every bin (same scale measure_rss
// uses when nfft equals the OFDM fft size). Bins come out fftshifted and
// labeled center_freq + baseband offset.
inline std::vector<PsdBin> spectrum(const IqFrame& frame, int nfft, Frequency center_freq) {
    if (nfft <= 0 || !is_power_of_two(static_cast<std::size_t>(nfft))) {
        throw std::invalid_argument("nfft must be a positive power of two");
    }
    const std::size_t n = static_cast<std::size_t>(nfft);
    if (frame.samples.size() < n) {
        throw std::invalid_argument("frame shorter than nfft (" +
                                    std::to_string(frame.samples.size()) + " < " +
                                    std::to_string(nfft) + ")");
    }
    std::vector<double> window(n);
    double window_power = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        window[i] = 0.5 * (1.0 - std::cos(2.0 * M_PI * static_cast<double>(i) / static_cast<double>(n)));
        window_power += window[i] * window[i];
    }
    const std::size_t hop = n / 2;
    std::vector<double> accum(n, 0.0);
    std::size_t segments = 0;
    std::vector<Cplx> seg(n);
    for (std::size_t start = 0; start + n <= frame.samples.size(); start += hop) {
        for (std::size_t i = 0; i < n; ++i) {
            seg[i] = frame.samples[start + i] * window[i];
        }
        fft_unitary(seg, false);
        for (std::size_t k = 0; k < n; ++k) {
            // unitary FFT: |DFT|^2 = nfft * |fft_unitary|^2
            accum[k] += std::norm(seg[k]) * static_cast<double>(n);
        }
        ++segments;
    }
    std::vector<PsdBin> bins(n);
    const double bin_spacing = frame.sample_rate_hz / static_cast<double>(nfft);
    for (std::size_t i = 0; i < n; ++i) {
        // fftshift: output index i corresponds to offset (i - nfft/2) bins
        std::size_t k = (i + n / 2) % n;
        double offset = (static_cast<double>(i) - static_cast<double>(n / 2)) * bin_spacing;
        double power = accum[k] / (static_cast<double>(segments) * window_power);
        bins[i].freq_hz = center_freq.hertz + offset;
        bins[i].psd_db = power_to_db(power);
    }
    return bins;
}

// Gray-coded 16-QAM bit error probability over AWGN:
// (3Q(x) + 2Q(3x) - Q(5x)) / 4 with x = sqrt(Es/N0 / 5).
inline double qam16_ber_theory(double esn0_db) {
    auto q = [](double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); };
    double x = std::sqrt(db_to_power(esn0_db) / 5.0);
    return (3.0 * q(x) + 2.0 * q(3.0 * x) - q(5.0 * x)) / 4.0;
}

}  // namespace dsasim

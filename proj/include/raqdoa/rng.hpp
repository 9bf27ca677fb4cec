// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The raq-doa Authors

#ifndef RAQDOA_RNG_HPP
#define RAQDOA_RNG_HPP

#include <complex>
#include <cstdint>
#include <random>

namespace raqdoa::rng
{
    using Engine = std::mt19937_64;

    // Purpose tags, so independent quantities never share a stream.
    enum class Stream : std::uint64_t
    {
        scene = 1,
        waveform = 2,
        raq_noise = 3,
        classical_noise = 4,
    };

    inline std::uint64_t splitmix64(std::uint64_t x)
    {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    // Stateless key derivation: the same (seed, a, b) always yields the same value.
    inline std::uint64_t derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0)
    {
        return splitmix64(splitmix64(splitmix64(seed) ^ a) ^ (b * 0xd1b54a32d192ed03ULL));
    }

    inline Engine stream(std::uint64_t seed, Stream purpose, std::uint64_t index = 0)
    {
        return Engine(derive(seed, static_cast<std::uint64_t>(purpose), index));
    }

    // Circular complex Gaussian with unit variance.
    inline std::complex<double> complex_normal(Engine &eng, std::normal_distribution<double> &nd)
    {
        constexpr double s = 0.70710678118654752440;
        const double re = nd(eng);
        const double im = nd(eng);
        return {s * re, s * im};
    }
}

#endif

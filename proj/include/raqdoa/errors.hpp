// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The raq-doa Authors

#ifndef RAQDOA_ERRORS_HPP
#define RAQDOA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace raqdoa
{
    // Caller passed a malformed argument (shape, range, NaN).
    class InvalidInput : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    // Scene violates a model assumption (K >= M, coincident DOAs, singular covariance).
    class InvalidScene : public InvalidInput
    {
    public:
        using InvalidInput::InvalidInput;
    };

    class NumericalFailure : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // Null space of a steady-state system is not one-dimensional.
    class DegenerateSystem : public NumericalFailure
    {
    public:
        using NumericalFailure::NumericalFailure;
    };

    // PSL noise coefficient with cos(varphi) = 0.
    class UnboundedNoise : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // Phase of a zero complex derivative.
    class UndefinedPhase : public std::domain_error
    {
    public:
        using std::domain_error::domain_error;
    };
}

#endif

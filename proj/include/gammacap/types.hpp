#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace gammacap {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline bool isFinite(Complex z) noexcept
{
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

/// Evaluation at a pole, on a branch cut, or on an integration contour.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Invalid geometry, basis, or configuration input.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace gammacap

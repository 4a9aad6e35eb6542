#pragma once

#include "gammacap/geometry.hpp"
#include "gammacap/types.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <type_traits>
#include <vector>

namespace gammacap {

struct QuadratureConfig {
    double absTol = 1e-9;
    /// Floor relative to the local Simpson value; absTol alone is unreachable in double
    /// precision once integrands reach magnitudes around 1e7.
    double relTol = 1e-13;
    int maxDepth = 50;
    int minIntervals = 16;  // initial panels per component

    void check() const
    {
        if (!(absTol > 0.0) || !(relTol >= 0.0) || maxDepth < 1 || minIntervals < 1) {
            throw InputError("invalid quadrature configuration");
        }
    }
};

struct QuadResult {
    Complex value;
    double errorEstimate = 0.0;
};

class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, QuadResult partial)
        : std::runtime_error(what), partial_(partial)
    {
    }
    const QuadResult& partial() const noexcept { return partial_; }

private:
    QuadResult partial_;
};

namespace detail {

template <class F>
struct SimpsonState {
    F& f;
    double relTol;
    int maxDepth;
    bool exhausted = false;
    double failedAt = 0.0;
    double error = 0.0;

    Complex recurse(double a, double b, Complex fa, Complex fm, Complex fb, Complex whole, double tol, int depth)
    {
        const double m = 0.5 * (a + b);
        const double lm = 0.5 * (a + m);
        const double rm = 0.5 * (m + b);
        const Complex flm = f(lm);
        const Complex frm = f(rm);
        // exact half widths, so a child's coarse estimate equals the parent's half estimate
        const double hl = (m - a) / 6.0;
        const double hr = (b - m) / 6.0;
        const Complex left = hl * (fa + 4.0 * flm + fm);
        const Complex right = hr * (fm + 4.0 * frm + fb);
        const Complex fine = left + right;
        const double diff = std::abs(fine - whole);
        // relative floor against the integral of |f|, which bounds the rounding in diff
        const double mass = hl * (std::abs(fa) + 4.0 * std::abs(flm) + std::abs(fm)) +
                            hr * (std::abs(fm) + 4.0 * std::abs(frm) + std::abs(fb));
        if (diff <= 15.0 * std::max(tol, relTol * mass)) {
            error += diff / 15.0;
            return fine + (fine - whole) / 15.0;
        }
        if (depth >= maxDepth || !(m > a && m < b)) {
            if (!exhausted) {
                failedAt = m;
            }
            exhausted = true;
            error += diff / 15.0;
            return fine;
        }
        return recurse(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
               recurse(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
    }
};

}  // namespace detail

/// Recursive adaptive Simpson on [t0, t1]; local acceptance |S_fine - S_coarse| <= 15 tol,
/// tolerance halved per level. Throws ConvergenceError (with the partial sum) when maxDepth
/// is reached before acceptance.
template <class F>
QuadResult adaptiveSimpson(F&& f, double t0, double t1, const QuadratureConfig& cfg)
{
    cfg.check();
    const int panels = std::max(1, cfg.minIntervals);
    detail::SimpsonState<F> state{f, cfg.relTol, cfg.maxDepth};
    Complex total;
    const double width = (t1 - t0) / panels;
    Complex fa = f(t0);
    for (int p = 0; p < panels; ++p) {
        const double a = t0 + width * p;
        const double b = p + 1 == panels ? t1 : t0 + width * (p + 1);
        const double m = 0.5 * (a + b);
        const Complex fm = f(m);
        const Complex fb = f(b);
        const Complex whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        total += state.recurse(a, b, fa, fm, fb, whole, cfg.absTol / panels, 0);
        fa = fb;
    }
    QuadResult result{total, state.error};
    if (state.exhausted) {
        throw ConvergenceError("adaptive Simpson exceeded the recursion limit near t = " + std::to_string(state.failedAt),
                               result);
    }
    return result;
}

/// Integral of phi(point) |dz| over one boundary component. Breakpoints of piecewise curves
/// are panel boundaries; cfg.minIntervals panels are spread over the component.
template <class Phi>
QuadResult integrateBoundary(const BoundaryComponent& component, Phi&& phi, const QuadratureConfig& cfg)
{
    auto breaks = component.breakpoints();
    breaks.push_back(1.0);
    const int pieces = static_cast<int>(breaks.size()) - 1;
    QuadratureConfig local = cfg;
    local.minIntervals = std::max(1, (cfg.minIntervals + pieces - 1) / pieces);
    local.absTol = cfg.absTol / pieces;
    auto integrand = [&](double t) -> Complex {
        const BoundaryPoint p = parametrize(component, t);
        if (p.speed == 0.0) {
            return 0.0;
        }
        if constexpr (std::is_invocable_v<Phi&, const BoundaryPoint&>) {
            return phi(p) * p.speed;
        } else {
            return phi(p.z) * p.speed;
        }
    };
    QuadResult sum;
    for (int k = 0; k < pieces; ++k) {
        const QuadResult part = adaptiveSimpson(integrand, breaks[k], breaks[k + 1], local);
        sum.value += part.value;
        sum.errorEstimate += part.errorEstimate;
    }
    return sum;
}

/// Arclength of the component by adaptive quadrature.
double arclength(const BoundaryComponent& component, const QuadratureConfig& cfg = {});

/// Closed form of the circle integral of (z-a)^(-1) conj((z-b)^(-1)) |dz|.
Complex circlePairIntegral(Complex a, Complex b, const Circle& circle);

/// Closed form of the circle integral of (z-a)^(-1) |dz|.
Complex circleMoment(Complex a, const Circle& circle);

}  // namespace gammacap

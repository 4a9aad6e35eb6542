#include "gammacap/quadrature.hpp"

namespace gammacap {

namespace {

bool insideCircle(Complex p, const Circle& circle)
{
    const double d = std::abs(p - circle.center);
    if (std::abs(d - circle.radius) <= 1e-14 * circle.radius) {
        throw DomainError("pole lies on the integration circle");
    }
    return d < circle.radius;
}

}  // namespace

double arclength(const BoundaryComponent& component, const QuadratureConfig& cfg)
{
    return integrateBoundary(component, [](Complex) { return Complex(1.0); }, cfg).value.real();
}

// On |z-c| = r, |dz| = -i r dz/(z-c) and conj(z-b) = r^2/(z-c) + conj(c-b), so the integral is
// -i r times a contour integral of 1/((z-a)(r^2 - conj(b-c)(z-c))). Its poles are a and the
// reflection c + r^2/conj(b-c), which lies inside exactly when b lies outside; the two
// residues cancel when both poles are inside.
Complex circlePairIntegral(Complex a, Complex b, const Circle& circle)
{
    const bool aInside = insideCircle(a, circle);
    const bool bInside = insideCircle(b, circle);
    if (aInside != bInside) {
        return 0.0;
    }
    const double r = circle.radius;
    const Complex value = kTwoPi * r / (r * r - (a - circle.center) * std::conj(b - circle.center));
    return aInside ? value : -value;
}

// -i r times the contour integral of 1/((z-a)(z-c)): residues at a and c cancel when a is
// inside; otherwise only c contributes.
Complex circleMoment(Complex a, const Circle& circle)
{
    if (insideCircle(a, circle)) {
        return 0.0;
    }
    return kTwoPi * circle.radius / (circle.center - a);
}

}  // namespace gammacap

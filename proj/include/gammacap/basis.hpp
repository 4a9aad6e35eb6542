#pragma once

#include "gammacap/geometry.hpp"
#include "gammacap/types.hpp"

#include <json.hpp>

#include <span>
#include <variant>
#include <vector>

namespace gammacap {

/// z -> 1/(z - pole)
struct SimplePole {
    Complex pole;
};

/// z -> (z - pole)^(-order)
struct MultiPole {
    Complex pole;
    int order = 1;
};

/// z -> ((z - corner)/(z - base))^(-exponent) * (z - base)^(-power), principal branch.
/// Analytic off the segment [base, corner] and tends to 0 at infinity.
struct CornerPower {
    Complex corner;
    Complex base;
    double exponent = 0.0;
    int power = 1;
};

using BasisFunction = std::variant<SimplePole, MultiPole, CornerPower>;

bool operator==(const SimplePole& a, const SimplePole& b);
bool operator==(const MultiPole& a, const MultiPole& b);
bool operator==(const CornerPower& a, const CornerPower& b);

Complex eval(const BasisFunction& f, Complex z);
/// eval on a boundary point; a corner power at the point's junction uses the stored offset for z - corner.
Complex evalOnBoundary(const BasisFunction& f, const BoundaryPoint& p);

/// lim z f(z) as z -> infinity.
Complex residueAtInfinity(const BasisFunction& f);

/// True when f is z -> 1/(z - a); sets `pole` to a.
bool isSimplePole(const BasisFunction& f, Complex& pole);

struct BasisSet {
    std::vector<BasisFunction> functions;
    int stage = 0;

    std::size_t size() const { return functions.size(); }
};

/// True when `coarse` lists the first functions of `fine` in the same order.
bool isPrefixOf(const BasisSet& coarse, const BasisSet& fine);

/// Center plus four poles per ring at radii i*radius/(rings+1), i = 1..rings.
std::vector<BasisFunction> diskPoleLayout(Complex center, double radius, int rings, double phase = 0.0);

/// Same layout on the ellipse scaled by i/(rings+1) about its center.
std::vector<BasisFunction> ellipsePoleLayout(const Ellipse& ellipse, int rings);

/// Singularity exponent of sqrt(F') at a corner with the given interior angle;
/// 1/6 for a right angle.
double cornerExponent(double interiorAngle);

/// Corner-adapted family: for k = 1..degree, (z-b)^(-k) for each component anchor b, then
/// CornerPower{a, b, mu(a), k} for every corner a of that component.
BasisSet cornerBasis(const CompactSet& set, int degree);

/// Ring layouts on every circle and ellipse component.
BasisSet poleRingBasis(const CompactSet& set, int rings);

/// (z-p)^(-j) for j = 1..order and every p in poles, ordered by j first.
BasisSet multipoleBasis(std::span<const Complex> poles, int order);

enum class BasisFamily { PoleRings, CornerAdapted, MultiPoleAtAnchors };

BasisSet buildBasis(const CompactSet& set, BasisFamily family, int stage);

/// Throws InputError unless every pole (and branch segment) lies strictly inside E.
void checkBasisInside(const CompactSet& set, const BasisSet& basis);

nlohmann::json basisToJson(const BasisSet& basis);

}  // namespace gammacap

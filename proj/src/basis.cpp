#include "gammacap/basis.hpp"

#include "gammacap/geometry_io.hpp"

#include <algorithm>
#include <cmath>

namespace gammacap {

namespace {

Complex inversePower(Complex w, int order)
{
    const Complex inv = 1.0 / w;
    Complex result = inv;
    for (int k = 1; k < order; ++k) {
        result *= inv;
    }
    return result;
}

bool insideSome(const CompactSet& set, Complex z)
{
    return std::any_of(set.components.begin(), set.components.end(),
                       [&](const BoundaryComponent& c) { return c.contains(z); });
}

bool segmentInside(const BoundaryComponent& component, Complex from, Complex to)
{
    // Half-open segment [from, to): the endpoint `to` is a corner on the boundary.
    constexpr int kSamples = 64;
    for (int i = 0; i < kSamples; ++i) {
        const double s = static_cast<double>(i) / kSamples;
        if (!component.contains(from + (to - from) * s)) {
            return false;
        }
    }
    return true;
}

}  // namespace

bool operator==(const SimplePole& a, const SimplePole& b)
{
    return a.pole == b.pole;
}

bool operator==(const MultiPole& a, const MultiPole& b)
{
    return a.pole == b.pole && a.order == b.order;
}

bool operator==(const CornerPower& a, const CornerPower& b)
{
    return a.corner == b.corner && a.base == b.base && a.exponent == b.exponent && a.power == b.power;
}

namespace {

Complex evalCorner(const CornerPower& cp, Complex z, Complex fromCorner)
{
    if (z == cp.base) {
        throw DomainError("evaluation at a branch point");
    }
    const Complex w = fromCorner / (z - cp.base);
    if (w.imag() == 0.0 && w.real() <= 0.0) {
        throw DomainError("evaluation on the branch segment");
    }
    return std::pow(w, -cp.exponent) * inversePower(z - cp.base, cp.power);
}

}  // namespace

Complex eval(const BasisFunction& f, Complex z)
{
    if (const auto* sp = std::get_if<SimplePole>(&f)) {
        if (z == sp->pole) {
            throw DomainError("evaluation at a pole");
        }
        return 1.0 / (z - sp->pole);
    }
    if (const auto* mp = std::get_if<MultiPole>(&f)) {
        if (z == mp->pole) {
            throw DomainError("evaluation at a pole");
        }
        return inversePower(z - mp->pole, mp->order);
    }
    const auto& cp = std::get<CornerPower>(f);
    if (z == cp.corner) {
        throw DomainError("evaluation at a branch point");
    }
    return evalCorner(cp, z, z - cp.corner);
}

Complex evalOnBoundary(const BasisFunction& f, const BoundaryPoint& p)
{
    const auto* cp = std::get_if<CornerPower>(&f);
    if (cp == nullptr || !p.hasJunction) {
        return eval(f, p.z);
    }
    const Complex gap = p.junction - cp->corner;
    if (std::abs(gap) > 1e-12 * std::max(1.0, std::abs(cp->corner))) {
        return eval(f, p.z);
    }
    const Complex dz = p.offset + gap;
    if (dz == 0.0) {
        throw DomainError("evaluation at a branch point");
    }
    return evalCorner(*cp, p.z, dz);
}

Complex residueAtInfinity(const BasisFunction& f)
{
    if (std::holds_alternative<SimplePole>(f)) {
        return 1.0;
    }
    if (const auto* mp = std::get_if<MultiPole>(&f)) {
        return mp->order == 1 ? 1.0 : 0.0;
    }
    return std::get<CornerPower>(f).power == 1 ? 1.0 : 0.0;
}

bool isSimplePole(const BasisFunction& f, Complex& pole)
{
    if (const auto* sp = std::get_if<SimplePole>(&f)) {
        pole = sp->pole;
        return true;
    }
    if (const auto* mp = std::get_if<MultiPole>(&f); mp != nullptr && mp->order == 1) {
        pole = mp->pole;
        return true;
    }
    return false;
}

bool isPrefixOf(const BasisSet& coarse, const BasisSet& fine)
{
    if (coarse.size() > fine.size()) {
        return false;
    }
    return std::equal(coarse.functions.begin(), coarse.functions.end(), fine.functions.begin());
}

std::vector<BasisFunction> diskPoleLayout(Complex center, double radius, int rings, double phase)
{
    if (!(radius > 0.0)) {
        throw InputError("disk radius must be positive");
    }
    if (rings < 0) {
        throw InputError("ring count must be non-negative");
    }
    const Complex dir = phase == 0.0 ? Complex(1.0) : std::polar(1.0, phase);
    std::vector<BasisFunction> poles{SimplePole{center}};
    for (int i = 1; i <= rings; ++i) {
        const Complex ri = dir * (radius * i / (rings + 1));
        poles.emplace_back(SimplePole{center + ri});
        poles.emplace_back(SimplePole{center - ri});
        poles.emplace_back(SimplePole{center + Complex(0.0, 1.0) * ri});
        poles.emplace_back(SimplePole{center - Complex(0.0, 1.0) * ri});
    }
    return poles;
}

std::vector<BasisFunction> ellipsePoleLayout(const Ellipse& ellipse, int rings)
{
    if (rings < 0) {
        throw InputError("ring count must be non-negative");
    }
    const Complex rot = std::polar(1.0, ellipse.rotation);
    std::vector<BasisFunction> poles{SimplePole{ellipse.center}};
    for (int i = 1; i <= rings; ++i) {
        const double s = static_cast<double>(i) / (rings + 1);
        const Complex major = rot * (s * ellipse.semiMajor);
        const Complex minor = rot * Complex(0.0, s * ellipse.semiMinor);
        poles.emplace_back(SimplePole{ellipse.center + major});
        poles.emplace_back(SimplePole{ellipse.center - major});
        poles.emplace_back(SimplePole{ellipse.center + minor});
        poles.emplace_back(SimplePole{ellipse.center - minor});
    }
    return poles;
}

double cornerExponent(double interiorAngle)
{
    if (!(interiorAngle > 0.0 && interiorAngle < kTwoPi)) {
        throw InputError("corner interior angle must lie in (0, 2pi)");
    }
    return 0.5 * (1.0 - kPi / (kTwoPi - interiorAngle));
}

BasisSet cornerBasis(const CompactSet& set, int degree)
{
    if (degree < 1) {
        throw InputError("corner basis degree must be at least 1");
    }
    if (set.cornerCount() == 0) {
        throw InputError("corner basis requires at least one corner");
    }
    for (std::size_t c = 0; c < set.size(); ++c) {
        for (const auto& corner : set.components[c].corners) {
            if (!segmentInside(set.components[c], set.anchors[c], corner.vertex)) {
                throw InputError("branch segment from anchor to corner leaves component " + std::to_string(c));
            }
        }
    }
    BasisSet basis;
    basis.stage = degree;
    for (int k = 1; k <= degree; ++k) {
        for (std::size_t c = 0; c < set.size(); ++c) {
            const Complex base = set.anchors[c];
            basis.functions.emplace_back(MultiPole{base, k});
            for (const auto& corner : set.components[c].corners) {
                basis.functions.emplace_back(CornerPower{corner.vertex, base, cornerExponent(corner.interiorAngle), k});
            }
        }
    }
    return basis;
}

BasisSet poleRingBasis(const CompactSet& set, int rings)
{
    BasisSet basis;
    basis.stage = rings;
    for (const auto& comp : set.components) {
        std::vector<BasisFunction> poles;
        if (const auto* c = std::get_if<Circle>(&comp.kind)) {
            poles = diskPoleLayout(c->center, c->radius, rings, c->phase);
        } else if (const auto* e = std::get_if<Ellipse>(&comp.kind)) {
            poles = ellipsePoleLayout(*e, rings);
        } else {
            throw InputError("pole-ring layout needs circle or ellipse components");
        }
        basis.functions.insert(basis.functions.end(), poles.begin(), poles.end());
    }
    return basis;
}

BasisSet multipoleBasis(std::span<const Complex> poles, int order)
{
    if (order < 1) {
        throw InputError("multipole order must be at least 1");
    }
    BasisSet basis;
    basis.stage = order;
    for (int j = 1; j <= order; ++j) {
        for (const Complex& p : poles) {
            basis.functions.emplace_back(MultiPole{p, j});
        }
    }
    return basis;
}

BasisSet buildBasis(const CompactSet& set, BasisFamily family, int stage)
{
    switch (family) {
    case BasisFamily::PoleRings:
        return poleRingBasis(set, stage);
    case BasisFamily::CornerAdapted:
        return cornerBasis(set, stage);
    case BasisFamily::MultiPoleAtAnchors:
        return multipoleBasis(set.anchors, stage);
    }
    throw InputError("unknown basis family");
}

void checkBasisInside(const CompactSet& set, const BasisSet& basis)
{
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const auto& f = basis.functions[i];
        bool ok = true;
        if (const auto* sp = std::get_if<SimplePole>(&f)) {
            ok = insideSome(set, sp->pole);
        } else if (const auto* mp = std::get_if<MultiPole>(&f)) {
            ok = insideSome(set, mp->pole);
        } else {
            const auto& cp = std::get<CornerPower>(f);
            ok = std::any_of(set.components.begin(), set.components.end(), [&](const BoundaryComponent& c) {
                return segmentInside(c, cp.base, cp.corner);
            });
        }
        if (!ok) {
            throw InputError("basis function " + std::to_string(i) + " has a singularity outside E");
        }
    }
}

nlohmann::json basisToJson(const BasisSet& basis)
{
    nlohmann::json list = nlohmann::json::array();
    for (const auto& f : basis.functions) {
        if (const auto* sp = std::get_if<SimplePole>(&f)) {
            list.push_back({{"type", "simple_pole"}, {"pole", pointToJson(sp->pole)}});
        } else if (const auto* mp = std::get_if<MultiPole>(&f)) {
            list.push_back({{"type", "multi_pole"}, {"pole", pointToJson(mp->pole)}, {"order", mp->order}});
        } else {
            const auto& cp = std::get<CornerPower>(f);
            list.push_back({{"type", "corner_power"},
                            {"corner", pointToJson(cp.corner)},
                            {"base", pointToJson(cp.base)},
                            {"exponent", cp.exponent},
                            {"power", cp.power}});
        }
    }
    return {{"stage", basis.stage}, {"functions", list}};
}

}  // namespace gammacap

#include "gammacap/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace gammacap {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Grading s = w(sigma) with w'(0) = w'(1) = 0 (cubic contact at both ends).
double grade(double sigma)
{
    const double p = sigma * sigma * sigma;
    const double q = (1.0 - sigma) * (1.0 - sigma) * (1.0 - sigma);
    return p / (p + q);
}

double gradeDerivative(double sigma)
{
    const double p = sigma * sigma * sigma;
    const double q = (1.0 - sigma) * (1.0 - sigma) * (1.0 - sigma);
    const double d = p + q;
    return 3.0 * sigma * sigma * (1.0 - sigma) * (1.0 - sigma) / (d * d);
}

double wrapUnit(double t)
{
    double w = t - std::floor(t);
    if (w >= 1.0) {
        w = 0.0;
    }
    return w;
}

struct PiecePoint {
    Complex z;
    Complex dz;  // derivative with respect to the local parameter s in [0,1]
};

PiecePoint evalPiece(const Piece& piece, double s)
{
    return std::visit(Overloaded{
                          [&](const LinePiece& line) {
                              return PiecePoint{line.from + (line.to - line.from) * s, line.to - line.from};
                          },
                          [&](const ArcPiece& arc) {
                              const Complex e = std::polar(1.0, arc.start + arc.sweep * s);
                              return PiecePoint{arc.center + arc.radius * e, Complex(0.0, arc.sweep) * arc.radius * e};
                          },
                      },
                      piece);
}

// Point at local parameter s (or 1 - s when fromEnd) minus the piece endpoint it is measured from.
Complex pieceOffset(const Piece& piece, double s, bool fromEnd)
{
    return std::visit(Overloaded{
                          [&](const LinePiece& line) {
                              return fromEnd ? (line.from - line.to) * s : (line.to - line.from) * s;
                          },
                          [&](const ArcPiece& arc) {
                              const double theta = fromEnd ? arc.start + arc.sweep : arc.start;
                              const double delta = fromEnd ? -arc.sweep * s : arc.sweep * s;
                              // e^{i delta} - 1 = 2i sin(delta/2) e^{i delta/2}
                              return arc.radius * std::polar(1.0, theta) * Complex(0.0, 2.0 * std::sin(0.5 * delta)) *
                                     std::polar(1.0, 0.5 * delta);
                          },
                      },
                      piece);
}

std::vector<double> cumulativeLengths(const PiecewiseArcs& curve)
{
    std::vector<double> cumulative(curve.pieces.size() + 1, 0.0);
    for (std::size_t k = 0; k < curve.pieces.size(); ++k) {
        cumulative[k + 1] = cumulative[k] + pieceLength(curve.pieces[k]);
    }
    return cumulative;
}

BoundaryPoint parametrizePiecewise(const PiecewiseArcs& curve, double t)
{
    if (curve.pieces.empty()) {
        throw InputError("piecewise curve has no pieces");
    }
    const auto cumulative = cumulativeLengths(curve);
    const double total = cumulative.back();
    const double target = t * total;
    std::size_t k = 0;
    while (k + 1 < curve.pieces.size() && cumulative[k + 1] <= target) {
        ++k;
    }
    const double len = cumulative[k + 1] - cumulative[k];
    const double span = len / total;
    const double sigma = std::clamp((target - cumulative[k]) / len, 0.0, 1.0);
    const Piece& piece = curve.pieces[k];
    const PiecePoint pp = evalPiece(piece, grade(sigma));
    const double dsdt = gradeDerivative(sigma) / span;
    const double localSpeed = std::abs(pp.dz);
    BoundaryPoint out{pp.z, localSpeed * dsdt, pp.dz / localSpeed};
    out.hasJunction = true;
    if (sigma < 0.5) {
        out.junction = pieceStart(piece);
        out.offset = pieceOffset(piece, grade(sigma), false);
    } else {
        const double rest = std::clamp((cumulative[k + 1] - target) / len, 0.0, 1.0);
        out.junction = pieceEnd(piece);
        out.offset = pieceOffset(piece, grade(rest), true);
    }
    return out;
}

std::vector<Complex> densePolygon(const BoundaryComponent& component)
{
    // Piece endpoints plus interior arc samples; exact for polygons.
    if (const auto* pw = std::get_if<PiecewiseArcs>(&component.kind)) {
        std::vector<Complex> poly;
        for (const auto& piece : pw->pieces) {
            poly.push_back(pieceStart(piece));
            if (std::holds_alternative<ArcPiece>(piece)) {
                constexpr int kArcSamples = 128;
                for (int i = 1; i < kArcSamples; ++i) {
                    poly.push_back(evalPiece(piece, static_cast<double>(i) / kArcSamples).z);
                }
            }
        }
        return poly;
    }
    return sampleCurve(component, 1024);
}

double polygonSignedArea(std::span<const Complex> poly)
{
    double area = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Complex a = poly[i];
        const Complex b = poly[(i + 1) % poly.size()];
        area += a.real() * b.imag() - b.real() * a.imag();
    }
    return 0.5 * area;
}

double distanceToPolyline(std::span<const Complex> poly, Complex z)
{
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Complex a = poly[i];
        const Complex b = poly[(i + 1) % poly.size()];
        const Complex ab = b - a;
        const double len2 = std::norm(ab);
        double s = len2 > 0.0 ? ((z - a) * std::conj(ab)).real() / len2 : 0.0;
        s = std::clamp(s, 0.0, 1.0);
        best = std::min(best, std::abs(z - (a + s * ab)));
    }
    return best;
}

double sampledDistance(std::span<const Complex> a, std::span<const Complex> b)
{
    double best = std::numeric_limits<double>::infinity();
    for (const Complex& p : a) {
        for (const Complex& q : b) {
            best = std::min(best, std::abs(p - q));
        }
    }
    return best;
}

double boundingRadius(const BoundaryComponent& c, Complex anchor)
{
    if (const auto* circ = std::get_if<Circle>(&c.kind)) {
        return std::abs(circ->center - anchor) + circ->radius;
    }
    if (const auto* ell = std::get_if<Ellipse>(&c.kind)) {
        return std::abs(ell->center - anchor) + ell->semiMajor;
    }
    double r = 0.0;
    for (const Complex& z : densePolygon(c)) {
        r = std::max(r, std::abs(z - anchor));
    }
    return r;
}

std::string describe(std::size_t index)
{
    return "component " + std::to_string(index);
}

}  // namespace

Complex pieceStart(const Piece& piece)
{
    return evalPiece(piece, 0.0).z;
}

Complex pieceEnd(const Piece& piece)
{
    return evalPiece(piece, 1.0).z;
}

double pieceLength(const Piece& piece)
{
    return std::visit(Overloaded{
                          [](const LinePiece& line) { return std::abs(line.to - line.from); },
                          [](const ArcPiece& arc) { return arc.radius * std::abs(arc.sweep); },
                      },
                      piece);
}

BoundaryComponent BoundaryComponent::circle(Complex center, double radius, double phase)
{
    return BoundaryComponent{Circle{center, radius, phase}, {}};
}

BoundaryComponent BoundaryComponent::ellipse(Complex center, double a, double b, double rotation)
{
    return BoundaryComponent{Ellipse{center, a, b, rotation}, {}};
}

BoundaryComponent BoundaryComponent::piecewise(std::vector<Piece> pieces, std::vector<Corner> corners)
{
    return BoundaryComponent{PiecewiseArcs{std::move(pieces)}, std::move(corners)};
}

BoundaryComponent BoundaryComponent::traced(std::shared_ptr<const TracedCurve> curve)
{
    return BoundaryComponent{Traced{std::move(curve)}, {}};
}

Complex BoundaryComponent::defaultAnchor() const
{
    if (const auto* c = std::get_if<Circle>(&kind)) {
        return c->center;
    }
    if (const auto* e = std::get_if<Ellipse>(&kind)) {
        return e->center;
    }
    // Area centroid of the boundary polygon.
    const auto poly = densePolygon(*this);
    double area = 0.0;
    Complex moment;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Complex a = poly[i];
        const Complex b = poly[(i + 1) % poly.size()];
        const double cross = a.real() * b.imag() - b.real() * a.imag();
        area += cross;
        moment += (a + b) * cross;
    }
    return moment / (3.0 * area);
}

std::vector<double> BoundaryComponent::breakpoints() const
{
    const auto* pw = std::get_if<PiecewiseArcs>(&kind);
    if (pw == nullptr) {
        return {0.0};
    }
    const auto cumulative = cumulativeLengths(*pw);
    std::vector<double> result;
    for (std::size_t k = 0; k + 1 < cumulative.size(); ++k) {
        result.push_back(cumulative[k] / cumulative.back());
    }
    return result;
}

bool BoundaryComponent::contains(Complex z) const
{
    if (const auto* c = std::get_if<Circle>(&kind)) {
        return std::abs(z - c->center) < c->radius;
    }
    if (const auto* e = std::get_if<Ellipse>(&kind)) {
        const Complex local = (z - e->center) * std::polar(1.0, -e->rotation);
        const double x = local.real() / e->semiMajor;
        const double y = local.imag() / e->semiMinor;
        return x * x + y * y < 1.0;
    }
    const auto poly = densePolygon(*this);
    return windingNumber(poly, z) != 0 && distanceToPolyline(poly, z) > 0.0;
}

BoundaryPoint parametrize(const BoundaryComponent& component, double t)
{
    const double u = wrapUnit(t);
    return std::visit(Overloaded{
                          [&](const Circle& c) {
                              const Complex e = std::polar(1.0, kTwoPi * u);
                              return BoundaryPoint{c.center + c.radius * e, kTwoPi * c.radius, Complex(0.0, 1.0) * e};
                          },
                          [&](const Ellipse& e) {
                              const double theta = kTwoPi * u;
                              const Complex rot = std::polar(1.0, e.rotation);
                              const Complex local(e.semiMajor * std::cos(theta), e.semiMinor * std::sin(theta));
                              const Complex dlocal(-e.semiMajor * std::sin(theta), e.semiMinor * std::cos(theta));
                              const double speed = kTwoPi * std::abs(dlocal);
                              return BoundaryPoint{e.center + rot * local, speed, rot * dlocal / std::abs(dlocal)};
                          },
                          [&](const PiecewiseArcs& pw) { return parametrizePiecewise(pw, u); },
                          [&](const Traced& tr) { return tr.curve->at(u); },
                      },
                      component.kind);
}

std::vector<Complex> sampleCurve(const BoundaryComponent& component, int count)
{
    std::vector<Complex> samples;
    samples.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        samples.push_back(parametrize(component, static_cast<double>(i) / count).z);
    }
    return samples;
}

int windingNumber(std::span<const Complex> polygon, Complex z)
{
    int wn = 0;
    for (std::size_t i = 0; i < polygon.size(); ++i) {
        const Complex a = polygon[i] - z;
        const Complex b = polygon[(i + 1) % polygon.size()] - z;
        const double cross = a.real() * b.imag() - b.real() * a.imag();
        if (a.imag() <= 0.0) {
            if (b.imag() > 0.0 && cross > 0.0) {
                ++wn;
            }
        } else if (b.imag() <= 0.0 && cross < 0.0) {
            --wn;
        }
    }
    return wn;
}

CompactSet::CompactSet(std::vector<BoundaryComponent> comps, std::vector<std::optional<Complex>> anchorOverrides)
    : components(std::move(comps))
{
    anchors.reserve(components.size());
    for (std::size_t i = 0; i < components.size(); ++i) {
        if (i < anchorOverrides.size() && anchorOverrides[i]) {
            anchors.push_back(*anchorOverrides[i]);
        } else {
            anchors.push_back(components[i].defaultAnchor());
        }
    }
}

std::size_t CompactSet::cornerCount() const
{
    std::size_t n = 0;
    for (const auto& c : components) {
        n += c.corners.size();
    }
    return n;
}

ValidationReport validate(const CompactSet& set, const ValidationOptions& options)
{
    ValidationReport report;
    auto fail = [&](const std::string& msg) { report.violations.push_back(msg); };

    if (set.anchors.size() != set.components.size()) {
        fail("anchor count does not match component count");
        return report;
    }

    std::vector<bool> usable(set.size(), true);
    for (std::size_t i = 0; i < set.size(); ++i) {
        const auto& comp = set.components[i];
        bool degenerate = false;
        if (const auto* c = comp.asCircle()) {
            if (!(c->radius > 0.0) || !std::isfinite(c->radius) || !isFinite(c->center)) {
                fail(describe(i) + ": degenerate circle radius");
                degenerate = true;
            }
        } else if (const auto* e = std::get_if<Ellipse>(&comp.kind)) {
            if (!(e->semiMajor > 0.0) || !(e->semiMinor > 0.0) || !std::isfinite(e->semiMajor) ||
                !std::isfinite(e->semiMinor) || !isFinite(e->center)) {
                fail(describe(i) + ": degenerate ellipse axes");
                degenerate = true;
            }
        } else if (const auto* pw = std::get_if<PiecewiseArcs>(&comp.kind)) {
            if (pw->pieces.size() < 2) {
                fail(describe(i) + ": piecewise curve needs at least two pieces");
                degenerate = true;
            }
            double scale = 0.0;
            for (const auto& piece : pw->pieces) {
                scale = std::max(scale, pieceLength(piece));
                if (!(pieceLength(piece) > 0.0)) {
                    degenerate = true;
                }
            }
            if (degenerate) {
                fail(describe(i) + ": degenerate piece");
            }
            for (std::size_t k = 0; k < pw->pieces.size() && !degenerate; ++k) {
                const Complex end = pieceEnd(pw->pieces[k]);
                const Complex next = pieceStart(pw->pieces[(k + 1) % pw->pieces.size()]);
                if (std::abs(end - next) > 1e-9 * std::max(1.0, scale)) {
                    fail(describe(i) + ": piece " + std::to_string(k) + " does not join the next piece");
                    degenerate = true;
                }
            }
            for (const auto& corner : comp.corners) {
                const bool atJunction =
                    std::any_of(pw->pieces.begin(), pw->pieces.end(), [&](const Piece& piece) {
                        return std::abs(pieceStart(piece) - corner.vertex) <= 1e-9 * std::max(1.0, scale);
                    });
                if (!atJunction) {
                    fail(describe(i) + ": corner does not lie on a piece junction");
                }
                if (!(corner.interiorAngle > 0.0 && corner.interiorAngle < kTwoPi)) {
                    fail(describe(i) + ": corner interior angle outside (0, 2pi)");
                }
            }
        }
        if (!comp.corners.empty() && !std::holds_alternative<PiecewiseArcs>(comp.kind)) {
            fail(describe(i) + ": corners are only allowed on piecewise curves");
        }
        if (degenerate) {
            usable[i] = false;
            continue;
        }
        const auto poly = densePolygon(comp);
        if (polygonSignedArea(poly) <= 0.0) {
            fail(describe(i) + ": boundary is not positively oriented");
        }
        const Complex anchor = set.anchors[i];
        if (!isFinite(anchor) || !comp.contains(anchor) || distanceToPolyline(poly, anchor) <= options.separationMargin) {
            fail(describe(i) + ": anchor is not strictly inside the component");
        }
    }

    for (std::size_t i = 0; i < set.size(); ++i) {
        for (std::size_t j = i + 1; j < set.size(); ++j) {
            if (!usable[i] || !usable[j]) {
                continue;
            }
            const auto& ci = set.components[i];
            const auto& cj = set.components[j];
            bool overlap = false;
            if (ci.isCircle() && cj.isCircle()) {
                const auto* a = ci.asCircle();
                const auto* b = cj.asCircle();
                overlap = std::abs(a->center - b->center) <= a->radius + b->radius + options.separationMargin;
            } else {
                const double far = std::abs(set.anchors[i] - set.anchors[j]);
                if (far <= boundingRadius(ci, set.anchors[i]) + boundingRadius(cj, set.anchors[j]) + options.separationMargin) {
                    const auto si = sampleCurve(ci, options.samplesPerComponent);
                    const auto sj = sampleCurve(cj, options.samplesPerComponent);
                    overlap = sampledDistance(si, sj) < options.separationMargin || ci.contains(sj.front()) ||
                              cj.contains(si.front());
                }
            }
            if (overlap) {
                fail(describe(i) + " and " + describe(j) + " are not mutually exterior");
            }
        }
    }
    return report;
}

double minPairwiseGap(std::span<const Complex> centers)
{
    if (centers.size() < 2) {
        throw InputError("minPairwiseGap needs at least two points");
    }
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < centers.size(); ++i) {
        for (std::size_t j = i + 1; j < centers.size(); ++j) {
            best = std::min(best, std::abs(centers[i] - centers[j]));
        }
    }
    if (!(best > 0.0)) {
        throw InputError("duplicate centers: minimal gap is zero");
    }
    return best;
}

CompactSet diskUnion(std::span<const Complex> centers, double radius)
{
    std::vector<BoundaryComponent> comps;
    comps.reserve(centers.size());
    for (const Complex& c : centers) {
        comps.push_back(BoundaryComponent::circle(c, radius));
    }
    return CompactSet(std::move(comps));
}

CompactSet affineImage(const CompactSet& set, Complex scale, Complex shift)
{
    const double factor = std::abs(scale);
    const double turn = std::arg(scale);
    auto map = [&](Complex z) { return scale * z + shift; };
    CompactSet out;
    for (std::size_t i = 0; i < set.size(); ++i) {
        const auto& comp = set.components[i];
        BoundaryComponent image = std::visit(
            Overloaded{
                [&](const Circle& c) { return BoundaryComponent::circle(map(c.center), c.radius * factor, c.phase + turn); },
                [&](const Ellipse& e) {
                    return BoundaryComponent::ellipse(map(e.center), e.semiMajor * factor, e.semiMinor * factor,
                                                      e.rotation + turn);
                },
                [&](const PiecewiseArcs& pw) {
                    std::vector<Piece> pieces;
                    for (const auto& piece : pw.pieces) {
                        if (const auto* line = std::get_if<LinePiece>(&piece)) {
                            pieces.emplace_back(LinePiece{map(line->from), map(line->to)});
                        } else {
                            const auto& arc = std::get<ArcPiece>(piece);
                            pieces.emplace_back(ArcPiece{map(arc.center), arc.radius * factor, arc.start + turn, arc.sweep});
                        }
                    }
                    std::vector<Corner> corners;
                    for (const auto& corner : comp.corners) {
                        corners.push_back(Corner{map(corner.vertex), corner.interiorAngle});
                    }
                    return BoundaryComponent::piecewise(std::move(pieces), std::move(corners));
                },
                [&](const Traced&) -> BoundaryComponent {
                    throw InputError("affine images of traced curves are not supported");
                },
            },
            comp.kind);
        out.components.push_back(std::move(image));
        out.anchors.push_back(map(set.anchors[i]));
    }
    return out;
}

}  // namespace gammacap

#pragma once

#include "gammacap/types.hpp"

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace gammacap {

struct Circle {
    Complex center;
    double radius = 0.0;
    double phase = 0.0;  // radians; orients the pole rings, rotated along by affine maps
};

struct Ellipse {
    Complex center;
    double semiMajor = 0.0;
    double semiMinor = 0.0;
    double rotation = 0.0;  // radians, direction of the major axis
};

struct LinePiece {
    Complex from;
    Complex to;
};

/// Circular arc c + r e^{i(start + sweep s)}, s in [0,1]. Negative sweep runs clockwise.
struct ArcPiece {
    Complex center;
    double radius = 0.0;
    double start = 0.0;
    double sweep = 0.0;
};

using Piece = std::variant<LinePiece, ArcPiece>;

Complex pieceStart(const Piece& piece);
Complex pieceEnd(const Piece& piece);
double pieceLength(const Piece& piece);

/// Closed curve made of line segments and circular arcs, traversed in order.
struct PiecewiseArcs {
    std::vector<Piece> pieces;
};

struct BoundaryPoint {
    Complex z;
    double speed = 0.0;  // |dz/dt|
    Complex tangent;     // unit tangent
    // Piecewise curves only: the nearest piece endpoint and z - junction computed without
    // cancellation, so that singular factors at corners keep full relative precision.
    bool hasJunction = false;
    Complex junction{};
    Complex offset{};
};

/// Black-box analytic closed curve, used for level curves traced numerically.
class TracedCurve {
public:
    virtual ~TracedCurve() = default;
    virtual BoundaryPoint at(double t) const = 0;
};

struct Traced {
    std::shared_ptr<const TracedCurve> curve;
};

struct Corner {
    Complex vertex;
    double interiorAngle = 0.0;  // measured inside E
};

struct BoundaryComponent {
    std::variant<Circle, Ellipse, PiecewiseArcs, Traced> kind;
    std::vector<Corner> corners;

    static BoundaryComponent circle(Complex center, double radius, double phase = 0.0);
    static BoundaryComponent ellipse(Complex center, double a, double b, double rotation = 0.0);
    static BoundaryComponent piecewise(std::vector<Piece> pieces, std::vector<Corner> corners);
    static BoundaryComponent traced(std::shared_ptr<const TracedCurve> curve);

    bool isCircle() const { return std::holds_alternative<Circle>(kind); }
    const Circle* asCircle() const { return std::get_if<Circle>(&kind); }

    /// Default interior anchor: center for circles/ellipses, vertex centroid for piecewise curves.
    Complex defaultAnchor() const;

    /// Parameter values in [0,1) where the parametrization is only piecewise smooth.
    std::vector<double> breakpoints() const;

    /// Whether z lies strictly inside the enclosed region (closed form where available).
    bool contains(Complex z) const;
};

/// Point, speed and unit tangent at parameter t (taken modulo 1).
/// Piecewise curves are graded towards every junction, so the speed vanishes there
/// and the tangent reported at a junction is the one-sided right tangent.
BoundaryPoint parametrize(const BoundaryComponent& component, double t);

/// Uniform parameter samples of the curve, `count` points.
std::vector<Complex> sampleCurve(const BoundaryComponent& component, int count);

/// Winding number of the sampled closed curve about z.
int windingNumber(std::span<const Complex> polygon, Complex z);

struct CompactSet {
    std::vector<BoundaryComponent> components;
    std::vector<Complex> anchors;  // one per component

    CompactSet() = default;
    explicit CompactSet(std::vector<BoundaryComponent> comps, std::vector<std::optional<Complex>> anchorOverrides = {});

    std::size_t size() const { return components.size(); }
    std::size_t cornerCount() const;
};

struct ValidationOptions {
    int samplesPerComponent = 256;
    double separationMargin = 1e-9;
};

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

ValidationReport validate(const CompactSet& set, const ValidationOptions& options = {});

/// Minimum pairwise distance; throws InputError on duplicates or fewer than two points.
double minPairwiseGap(std::span<const Complex> centers);

/// Union of equal disks centered at the given points.
CompactSet diskUnion(std::span<const Complex> centers, double radius);

/// Image of the set under z -> scale*z + shift.
CompactSet affineImage(const CompactSet& set, Complex scale, Complex shift);

}  // namespace gammacap

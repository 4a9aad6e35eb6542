#pragma once

#include "gammacap/capacity.hpp"
#include "gammacap/geometry.hpp"

#include <json.hpp>

#include <span>
#include <vector>

namespace gammacap {

/// Polynomial with ascending coefficients c[0] + c[1] z + ...
using Polynomial = std::vector<Complex>;

Complex evalPolynomial(const Polynomial& p, Complex z);
Polynomial derivative(const Polynomial& p);

/// All roots of p (leading zeros trimmed), via the companion matrix and Newton polishing.
std::vector<Complex> polynomialRoots(Polynomial p);

/// R(z) = sum_j a_j / (z - p_j).
struct RationalMap {
    std::vector<Complex> residues;
    std::vector<Complex> poles;

    /// Throws InputError unless lengths match, n >= 1, residues are nonzero and poles distinct.
    void check() const;
    std::size_t degree() const { return poles.size(); }

    Complex operator()(Complex z) const;
    Complex derivativeAt(Complex z) const;
    /// R'(inf) = sum of residues.
    Complex sumResidues() const;

    /// R = numerator/denominator with denominator = prod (z - p_j) monic.
    Polynomial numerator() const;
    Polynomial denominator() const;
};

struct CriticalValueReport {
    bool allInDisk = false;  // equivalently R^{-1}(D) is n-connected
    std::vector<Complex> criticalPoints;
    std::vector<Complex> criticalValues;
};

CriticalValueReport criticalValuesInDisk(const RationalMap& map);

/// Closed strands of |R| = 1; strand k holds z at t_i = 2 pi i / samples for i = 0..samples,
/// so the last point repeats the first.
struct TracedBoundary {
    std::vector<std::vector<Complex>> strands;
    int samples = 0;
};

/// Root continuation was ambiguous; retry with more samples.
class RefinementNeeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The level set {|R| = 1} is not n disjoint closed curves (a critical value lies outside the disk).
class DisconnectedLevelSet : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Solves R(z) = e^{it} for `samples` values of t and links the n roots into strands by
/// nearest-neighbour continuation, starting from roots sorted by argument about the pole centroid.
TracedBoundary traceBoundary(const RationalMap& map, int samples);

/// traceBoundary, doubling the sample count on RefinementNeeded up to maxSamples.
TracedBoundary traceBoundaryRefined(const RationalMap& map, int samples, int maxSamples = 1 << 16);

/// E = {|R| >= 1} as traced components, each anchored at the pole it encloses.
CompactSet levelSetCompact(const RationalMap& map, const TracedBoundary& boundary);

enum class AhlforsVerdict { Ahlfors, NotAhlfors, Inconclusive };

const char* toString(AhlforsVerdict verdict);

struct AhlforsReport {
    AhlforsVerdict verdict = AhlforsVerdict::Inconclusive;
    Complex sumResidues;
    double lower = 0.0;
    double upper = 0.0;
    double tolerance = 0.0;
    std::vector<CapacityBounds> stages;
    int samples = 0;
};

/// Brackets gamma(E) with multipoles at the poles of R (orders solver.firstStage..maxStage) and
/// compares it with |sum a_j|. "Ahlfors" means only that the bracket is consistent with equality.
/// Throws DisconnectedLevelSet when a critical value lies outside the open unit disk.
AhlforsReport verifyAhlfors(const RationalMap& map, const SolverConfig& solver, int samples = 512);

/// Rational map with real distinct poles and positive residues.
RationalMap realSymmetricMap(std::span<const double> residues, std::span<const double> poles);

/// a z^{n-1} / (z^n - 1) as partial fractions (residue a/n at each n-th root of unity);
/// requires n >= 2 and 0 < a < n (n-1)^{(1-n)/n}.
RationalMap rotationalMap(int n, double a);

RationalMap rationalMapFromJson(const nlohmann::json& doc);
nlohmann::json rationalMapToJson(const RationalMap& map);

}  // namespace gammacap

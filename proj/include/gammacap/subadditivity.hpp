#pragma once

#include "gammacap/capacity.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

namespace gammacap {

/// Centers of E_r (z_1..z_n) and F_r (w_1..w_m) plus the radii to sweep.
struct DiskPairConfig {
    std::vector<Complex> centersE;
    std::vector<Complex> centersF;
    std::vector<double> rGrid;

    std::vector<Complex> allCenters() const;
    /// Minimal distance between any two centers.
    double delta() const;
    /// Throws InputError unless centers are distinct and every radius lies in (0, delta/2).
    void check() const;
};

/// `steps` radii equally spaced from delta/1000 to 0.499 delta.
std::vector<double> defaultRadiusGrid(double delta, int steps);

struct RatioPoint {
    double r = 0.0;
    bool valid = false;
    double ratioLower = 0.0;
    double ratioUpper = 0.0;
    CapacityBounds unionBounds;
    CapacityBounds boundsE;
    CapacityBounds boundsF;
    std::string error;  // set when !valid

    double gap() const { return ratioUpper - ratioLower; }
};

/// R(r) = gamma(E_r u F_r) / (gamma(E_r) + gamma(F_r)) bracketed per radius:
///   lower = lower(union) / (upper(E) + upper(F)),  upper = upper(union) / (lower(E) + lower(F)).
/// A failed capacity solve marks that radius invalid; the sweep continues.
std::vector<RatioPoint> ratioSweep(const DiskPairConfig& cfg, const SolverConfig& solver);

struct AsymptoticFitResult {
    double C = 0.0;          // limit of (1 - R)/r^2 as r -> 0
    double slope = 0.0;      // first-order correction in r
    double residual = 0.0;   // RMS misfit relative to |C|
    std::size_t pointsUsed = 0;
};

/// Least-squares fit of (1 - R(r))/r^2 = C + slope*r over valid points with r <= rMax,
/// using the bracket midpoint. Throws InputError with fewer than 3 usable points.
AsymptoticFitResult asymptoticFit(std::span<const RatioPoint> points, double rMax);

struct MonotonicityViolation {
    double rFrom = 0.0;
    double rTo = 0.0;
    double upperAtFrom = 0.0;
    double lowerAtTo = 0.0;
};

/// Adjacent valid pairs (sorted by r) where ratioLower(r_{i+1}) > ratioUpper(r_i): a certified increase.
std::vector<MonotonicityViolation> monotonicityScan(std::span<const RatioPoint> points);

/// Largest certified upper bound for R over valid points.
double maxRatioUpper(std::span<const RatioPoint> points);

/// `count` centers drawn uniformly in [0, side]^2 with rejection enforcing minGap, then rescaled
/// so that the minimal pairwise distance is exactly 1. Deterministic for a given seed.
std::vector<Complex> randomCenters(int count, double side, double minGap, std::uint64_t seed);

/// Random configuration with n centers in E and m in F (delta = 1), no radius grid.
DiskPairConfig randomPairConfig(int n, int m, double side, std::uint64_t seed);

/// Header r,ratio_lower,ratio_upper,gamma_union_lower,gamma_union_upper,gamma_E_lower,gamma_E_upper,
/// gamma_F_lower,gamma_F_upper; invalid points keep r and leave the other fields empty.
void writeSweepCsv(std::ostream& out, std::span<const RatioPoint> points);

/// {"E": [[re,im],...], "F": [...]} or {"random": {"n":..,"m":..,"side":..,"seed":..}}.
/// `seedOverride` replaces the document's seed when given.
DiskPairConfig pairConfigFromJson(const nlohmann::json& doc, std::optional<std::uint64_t> seedOverride = {});

}  // namespace gammacap

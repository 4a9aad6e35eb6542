#pragma once

#include "gammacap/basis.hpp"
#include "gammacap/geometry.hpp"
#include "gammacap/linalg.hpp"
#include "gammacap/quadrature.hpp"

#include <optional>
#include <string>
#include <vector>

namespace gammacap {

/// Boundary inner products of a basis g_1..g_N over the boundary of E:
///   A(i,j) = int g_i conj(g_j) |dz|,  M(j) = int g_j |dz|,
///   beta(j) = lim z g_j(z) at infinity,  length = int |dz|.
struct GramSystem {
    CMatrix A;
    CVector M;
    CVector beta;
    double length = 0.0;

    Eigen::Index size() const { return A.rows(); }
};

class AssemblyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IllConditionedError : public SolveError {
public:
    IllConditionedError(const std::string& what, double condition)
        : SolveError(what), condition_(condition)
    {
    }
    double condition() const noexcept { return condition_; }

private:
    double condition_;
};

/// Assembles the Gram system. Circle components paired with simple poles use closed forms,
/// everything else adaptive Simpson. When `prefix` is the system of a basis that is a prefix of
/// `basis`, its entries are reused.
GramSystem assemble(const CompactSet& set, const BasisSet& basis, const QuadratureConfig& cfg,
                    const GramSystem* prefix = nullptr);

inline constexpr double kDefaultConditionLimit = 1e15;

struct QuadraticBounds {
    double lower = 0.0;
    double upper = 0.0;
    double conditionEstimate = 1.0;
};

/// Both quadratic programs from one factorization of the diagonally equilibrated Gram matrix:
///   upper = (L - M* A^-1 M) / 2pi          (minimum of (1/2pi) int |1+g|^2 |dz|)
///   lower = max(0, 2pi beta* A^-1 beta)    (maximum of 2 Re h'(inf) - (1/2pi) int |h|^2 |dz|)
/// Throws IllConditionedError when the condition estimate exceeds conditionLimit.
QuadraticBounds solveBounds(const GramSystem& sys, double conditionLimit = kDefaultConditionLimit);

double upperBound(const GramSystem& sys, double conditionLimit = kDefaultConditionLimit);
double lowerBound(const GramSystem& sys, double conditionLimit = kDefaultConditionLimit);

struct CapacityBounds {
    double lower = 0.0;
    double upper = 0.0;
    int stage = 0;
    std::size_t basisSize = 0;
    double conditionEstimate = 1.0;
    double quadTol = 0.0;
    double elapsedSeconds = 0.0;

    double gap() const { return upper - lower; }
};

struct SolverConfig {
    BasisFamily family = BasisFamily::PoleRings;
    int firstStage = 0;
    int maxStage = 4;
    double gapTarget = 1e-10;
    QuadratureConfig quadrature;
    double conditionLimit = kDefaultConditionLimit;

    void check() const;
};

enum class StopReason { GapTargetMet, MaxStageReached, IllConditioned };

const char* toString(StopReason reason);

struct BoundsRun {
    std::vector<CapacityBounds> stages;
    StopReason reason = StopReason::MaxStageReached;
    std::string note;

    const CapacityBounds& last() const { return stages.back(); }
};

/// Failure during a staged run; carries the last stage that completed.
class CapacityError : public std::runtime_error {
public:
    CapacityError(const std::string& what, std::optional<CapacityBounds> lastGood)
        : std::runtime_error(what), lastGood_(lastGood)
    {
    }
    const std::optional<CapacityBounds>& lastGood() const noexcept { return lastGood_; }

private:
    std::optional<CapacityBounds> lastGood_;
};

/// Runs the refinement schedule firstStage..maxStage, one bracket per stage, stopping early
/// once upper - lower <= gapTarget or when a stage is too ill-conditioned (that stage is dropped).
BoundsRun computeBounds(const CompactSet& set, const SolverConfig& cfg);

}  // namespace gammacap

#include "gammacap/capacity.hpp"

#include "gammacap/parallel.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <optional>

namespace gammacap {

namespace {

struct CircleData {
    Complex center;
    double radius;
    std::vector<signed char> poleInside;  // per basis function: 1 inside, 0 outside, -1 not a simple pole
};

QuadResult integrateOrThrow(const BoundaryComponent& comp, const auto& phi, const QuadratureConfig& cfg,
                            const std::string& entry, std::size_t componentIndex)
{
    try {
        return integrateBoundary(comp, phi, cfg);
    } catch (const ConvergenceError& e) {
        throw AssemblyError(entry + " on component " + std::to_string(componentIndex) + ": " + e.what());
    } catch (const DomainError& e) {
        throw AssemblyError(entry + " on component " + std::to_string(componentIndex) + ": " + e.what());
    }
}

}  // namespace

GramSystem assemble(const CompactSet& set, const BasisSet& basis, const QuadratureConfig& cfg,
                    const GramSystem* prefix)
{
    cfg.check();
    checkBasisInside(set, basis);
    const auto n = static_cast<Eigen::Index>(basis.size());
    Eigen::Index reuse = 0;
    if (prefix != nullptr && prefix->size() <= n) {
        reuse = prefix->size();
    }

    std::vector<Complex> poles(basis.size());
    std::vector<bool> simple(basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i) {
        simple[i] = isSimplePole(basis.functions[i], poles[i]);
    }

    std::vector<std::optional<CircleData>> circles(set.size());
    for (std::size_t k = 0; k < set.size(); ++k) {
        if (const auto* c = set.components[k].asCircle()) {
            CircleData data{c->center, c->radius, std::vector<signed char>(basis.size(), -1)};
            for (std::size_t i = 0; i < basis.size(); ++i) {
                if (simple[i]) {
                    const double d = std::abs(poles[i] - c->center);
                    if (std::abs(d - c->radius) <= 1e-14 * c->radius) {
                        throw AssemblyError("basis pole " + std::to_string(i) + " lies on circle " + std::to_string(k));
                    }
                    data.poleInside[i] = d < c->radius ? 1 : 0;
                }
            }
            circles[k] = std::move(data);
        }
    }

    GramSystem sys;
    sys.A = CMatrix::Zero(n, n);
    sys.M = CVector::Zero(n);
    sys.beta = CVector::Zero(n);
    if (reuse > 0) {
        sys.A.topLeftCorner(reuse, reuse) = prefix->A;
        sys.M.head(reuse) = prefix->M;
    }

    for (std::size_t k = 0; k < set.size(); ++k) {
        if (circles[k]) {
            sys.length += kTwoPi * circles[k]->radius;
        } else {
            sys.length += integrateOrThrow(set.components[k], [](Complex) { return Complex(1.0); }, cfg, "arclength", k)
                              .value.real();
        }
    }

    // Row i holds entries (i, j) for j >= i; rows below `reuse` only need columns >= reuse.
    parallelFor(basis.size(), [&](std::size_t i) {
        const auto& gi = basis.functions[i];
        const auto row = static_cast<Eigen::Index>(i);
        if (row >= reuse) {
            sys.beta(row) = residueAtInfinity(gi);
            Complex moment;
            for (std::size_t k = 0; k < set.size(); ++k) {
                if (circles[k] && simple[i]) {
                    const auto& c = *circles[k];
                    if (!c.poleInside[i]) {
                        moment += kTwoPi * c.radius / (c.center - poles[i]);
                    }
                } else {
                    moment += integrateOrThrow(set.components[k], [&](const BoundaryPoint& p) { return evalOnBoundary(gi, p); }, cfg,
                                               "moment " + std::to_string(i), k)
                                  .value;
                }
            }
            sys.M(row) = moment;
        } else {
            sys.beta(row) = prefix->beta(row);
        }
        for (std::size_t j = std::max<std::size_t>(i, static_cast<std::size_t>(reuse)); j < basis.size(); ++j) {
            const auto& gj = basis.functions[j];
            Complex entry;
            for (std::size_t k = 0; k < set.size(); ++k) {
                if (circles[k] && simple[i] && simple[j]) {
                    const auto& c = *circles[k];
                    if (c.poleInside[i] != c.poleInside[j]) {
                        continue;
                    }
                    const Complex value = kTwoPi * c.radius /
                                          (c.radius * c.radius - (poles[i] - c.center) * std::conj(poles[j] - c.center));
                    entry += c.poleInside[i] ? value : -value;
                } else if (i == j) {
                    entry += integrateOrThrow(set.components[k], [&](const BoundaryPoint& p) { return Complex(std::norm(evalOnBoundary(gi, p))); },
                                              cfg, "Gram entry (" + std::to_string(i) + "," + std::to_string(j) + ")", k)
                                 .value;
                } else {
                    entry += integrateOrThrow(set.components[k],
                                              [&](const BoundaryPoint& p) { return evalOnBoundary(gi, p) * std::conj(evalOnBoundary(gj, p)); }, cfg,
                                              "Gram entry (" + std::to_string(i) + "," + std::to_string(j) + ")", k)
                                 .value;
                }
            }
            sys.A(row, static_cast<Eigen::Index>(j)) = entry;
        }
    });

    // Mirror the computed triangle; the diagonal is real by construction.
    for (Eigen::Index i = 0; i < n; ++i) {
        sys.A(i, i) = sys.A(i, i).real();
        for (Eigen::Index j = std::max(i + 1, reuse); j < n; ++j) {
            sys.A(j, i) = std::conj(sys.A(i, j));
        }
    }
    return sys;
}

QuadraticBounds solveBounds(const GramSystem& sys, double conditionLimit)
{
    const Eigen::Index n = sys.size();
    if (n == 0) {
        return {0.0, sys.length / kTwoPi, 1.0};
    }
    Eigen::VectorXd scale(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double d = sys.A(i, i).real();
        if (!(d > 0.0)) {
            throw SolveError("Gram matrix has a non-positive diagonal entry");
        }
        scale(i) = 1.0 / std::sqrt(d);
    }
    const CMatrix scaled = scale.asDiagonal() * sys.A * scale.asDiagonal();
    std::optional<HermitianFactor> built;
    try {
        built.emplace(scaled);
    } catch (const SolveError& e) {
        // A factorization breakdown on a finite matrix is loss of definiteness to rounding.
        if (!scaled.allFinite()) {
            throw;
        }
        throw IllConditionedError(e.what(), std::numeric_limits<double>::infinity());
    }
    const HermitianFactor& factor = *built;
    const double condition = factor.conditionEstimate();
    if (!(condition <= conditionLimit)) {
        throw IllConditionedError("Gram matrix condition estimate " + std::to_string(condition) + " exceeds limit",
                                  condition);
    }
    const CVector m = scale.asDiagonal() * sys.M;
    const CVector b = scale.asDiagonal() * sys.beta;
    const double mQuad = m.dot(factor.solve(m)).real();
    const double bQuad = b.dot(factor.solve(b)).real();
    QuadraticBounds out;
    out.upper = (sys.length - mQuad) / kTwoPi;
    out.lower = std::max(0.0, kTwoPi * bQuad);
    out.conditionEstimate = condition;
    return out;
}

double upperBound(const GramSystem& sys, double conditionLimit)
{
    return solveBounds(sys, conditionLimit).upper;
}

double lowerBound(const GramSystem& sys, double conditionLimit)
{
    return solveBounds(sys, conditionLimit).lower;
}

void SolverConfig::check() const
{
    if (!(gapTarget > 0.0)) {
        throw InputError("gap target must be positive");
    }
    if (!(conditionLimit > 1.0)) {
        throw InputError("condition limit must exceed 1");
    }
    if (firstStage < 0 || maxStage < firstStage) {
        throw InputError("invalid stage range");
    }
    if ((family == BasisFamily::CornerAdapted || family == BasisFamily::MultiPoleAtAnchors) && firstStage < 1) {
        throw InputError("degree-based schedules start at stage 1");
    }
    quadrature.check();
}

const char* toString(StopReason reason)
{
    switch (reason) {
    case StopReason::GapTargetMet:
        return "gap target met";
    case StopReason::MaxStageReached:
        return "maximum stage reached";
    case StopReason::IllConditioned:
        return "ill-conditioned Gram matrix";
    }
    return "unknown";
}

BoundsRun computeBounds(const CompactSet& set, const SolverConfig& cfg)
{
    cfg.check();
    BoundsRun run;
    std::optional<GramSystem> previousSystem;
    std::optional<BasisSet> previousBasis;
    auto lastGood = [&]() -> std::optional<CapacityBounds> {
        if (run.stages.empty()) {
            return std::nullopt;
        }
        return run.stages.back();
    };

    for (int stage = cfg.firstStage; stage <= cfg.maxStage; ++stage) {
        const auto start = std::chrono::steady_clock::now();
        try {
            BasisSet basis = buildBasis(set, cfg.family, stage);
            const GramSystem* prefix =
                previousBasis && isPrefixOf(*previousBasis, basis) ? &*previousSystem : nullptr;
            GramSystem sys = assemble(set, basis, cfg.quadrature, prefix);
            QuadraticBounds q;
            try {
                q = solveBounds(sys, cfg.conditionLimit);
            } catch (const IllConditionedError& e) {
                if (run.stages.empty()) {
                    throw;
                }
                run.reason = StopReason::IllConditioned;
                run.note = "stage " + std::to_string(stage) + " discarded: " + e.what();
                return run;
            }
            CapacityBounds bounds;
            bounds.lower = q.lower;
            bounds.upper = q.upper;
            bounds.stage = stage;
            bounds.basisSize = basis.size();
            bounds.conditionEstimate = q.conditionEstimate;
            bounds.quadTol = cfg.quadrature.absTol;
            bounds.elapsedSeconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            run.stages.push_back(bounds);
            previousSystem = std::move(sys);
            previousBasis = std::move(basis);
        } catch (const CapacityError&) {
            throw;
        } catch (const std::exception& e) {
            throw CapacityError("stage " + std::to_string(stage) + ": " + e.what(), lastGood());
        }
        if (run.stages.back().gap() <= cfg.gapTarget) {
            run.reason = StopReason::GapTargetMet;
            return run;
        }
    }
    run.reason = StopReason::MaxStageReached;
    return run;
}

}  // namespace gammacap

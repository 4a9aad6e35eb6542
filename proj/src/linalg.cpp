#include "gammacap/linalg.hpp"

#include <limits>

namespace gammacap {

HermitianFactor::HermitianFactor(const CMatrix& a) : size_(a.rows())
{
    if (a.rows() != a.cols()) {
        throw SolveError("matrix is not square");
    }
    if (!a.allFinite()) {
        throw SolveError("matrix has non-finite entries");
    }
    if (size_ == 0) {
        return;
    }
    llt_.compute(a);
    if (llt_.info() != Eigen::Success) {
        throw SolveError("Cholesky breakdown: matrix is numerically singular or indefinite");
    }
    const double rcond = llt_.rcond();
    condition_ = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
}

CVector HermitianFactor::solve(const CVector& rhs) const
{
    if (rhs.size() != size_) {
        throw SolveError("right-hand side has the wrong length");
    }
    if (!rhs.allFinite()) {
        throw SolveError("right-hand side has non-finite entries");
    }
    if (size_ == 0) {
        return CVector(0);
    }
    return llt_.solve(rhs);
}

HermitianSolution hermitianSolve(const CMatrix& a, const CVector& rhs)
{
    HermitianFactor factor(a);
    return {factor.solve(rhs), factor.conditionEstimate()};
}

}  // namespace gammacap

#pragma once

#include "gammacap/types.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <stdexcept>

namespace gammacap {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

class SolveError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Cholesky factorization of a Hermitian positive definite matrix with a 1-norm
/// condition estimate. Throws SolveError on non-finite input or breakdown.
class HermitianFactor {
public:
    explicit HermitianFactor(const CMatrix& a);

    CVector solve(const CVector& rhs) const;
    double conditionEstimate() const { return condition_; }
    Eigen::Index size() const { return size_; }

private:
    Eigen::LLT<CMatrix> llt_;
    double condition_ = 1.0;
    Eigen::Index size_ = 0;
};

struct HermitianSolution {
    CVector x;
    double conditionEstimate = 1.0;
};

HermitianSolution hermitianSolve(const CMatrix& a, const CVector& rhs);

}  // namespace gammacap

#include "gammacap/linalg.hpp"
#include "gammacap/parallel.hpp"

#include <doctest.h>

#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

using namespace gammacap;

namespace {

CMatrix randomSpd(int n, std::mt19937_64& gen, double spread)
{
    std::normal_distribution<double> g;
    CMatrix q(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            q(i, j) = Complex(g(gen), g(gen));
        }
    }
    Eigen::HouseholderQR<CMatrix> qr(q);
    const CMatrix u = qr.householderQ();
    Eigen::VectorXd d(n);
    for (int i = 0; i < n; ++i) {
        d(i) = std::pow(spread, static_cast<double>(i) / (n - 1));
    }
    CMatrix a = u * d.cast<Complex>().asDiagonal() * u.adjoint();
    return 0.5 * (a + a.adjoint());
}

double oneNormCondition(const CMatrix& a)
{
    const CMatrix inv = a.inverse();
    return a.cwiseAbs().colwise().sum().maxCoeff() * inv.cwiseAbs().colwise().sum().maxCoeff();
}

}  // namespace

TEST_CASE("identity and diagonal systems")
{
    CVector e1 = CVector::Zero(3);
    e1(0) = 1.0;
    const auto s = hermitianSolve(CMatrix::Identity(3, 3), e1);
    CHECK((s.x - e1).norm() < 1e-15);
    CHECK(s.conditionEstimate == doctest::Approx(1.0));

    CMatrix d = CMatrix::Identity(2, 2) * kTwoPi;
    const auto t = hermitianSolve(d, CVector::Ones(2));
    CHECK(std::abs(t.x(0) - 1.0 / kTwoPi) < 1e-15);
    CHECK(std::abs(t.x(1) - 1.0 / kTwoPi) < 1e-15);
}

TEST_CASE("random SPD recovers the chosen solution")
{
    std::mt19937_64 gen(7);
    std::normal_distribution<double> g;
    const CMatrix a = randomSpd(50, gen, 1e4);
    CVector x0(50);
    for (int i = 0; i < 50; ++i) {
        x0(i) = Complex(g(gen), g(gen));
    }
    const auto s = hermitianSolve(a, a * x0);
    CHECK((s.x - x0).norm() / x0.norm() < 1e-10);
}

TEST_CASE("condition estimate is within a factor of 10")
{
    std::mt19937_64 gen(11);
    for (double spread : {10.0, 1e4, 1e8}) {
        for (int rep = 0; rep < 3; ++rep) {
            const CMatrix a = randomSpd(30, gen, spread);
            const double est = HermitianFactor(a).conditionEstimate();
            const double exact = oneNormCondition(a);
            CHECK(est <= 10.0 * exact);
            CHECK(est >= exact / 10.0);
        }
    }
}

TEST_CASE("solver errors")
{
    CMatrix bad = CMatrix::Identity(2, 2);
    bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(HermitianFactor{bad}, SolveError);

    CMatrix indefinite = CMatrix::Identity(2, 2);
    indefinite(1, 1) = -1.0;
    CHECK_THROWS_AS(HermitianFactor{indefinite}, SolveError);

    CMatrix singular = CMatrix::Zero(2, 2);
    CHECK_THROWS_AS(HermitianFactor{singular}, SolveError);

    CHECK_THROWS_AS(HermitianFactor{CMatrix(2, 3)}, SolveError);
    HermitianFactor f(CMatrix::Identity(2, 2));
    CHECK_THROWS_AS(f.solve(CVector::Ones(3)), SolveError);
}

TEST_CASE("empty system")
{
    const auto s = hermitianSolve(CMatrix(0, 0), CVector(0));
    CHECK(s.x.size() == 0);
}

TEST_CASE("parallelFor visits every index and reports the lowest failure")
{
    std::vector<std::atomic<int>> hits(257);
    parallelFor(hits.size(), [&](std::size_t i) { hits[i]++; });
    for (auto& h : hits) {
        CHECK(h.load() == 1);
    }
    try {
        parallelFor(100, [](std::size_t i) {
            if (i == 40 || i == 73) {
                throw std::runtime_error("index " + std::to_string(i));
            }
        });
        FAIL("expected an exception");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()) == "index 40");
    }
    CHECK(workerCount() >= 1);
}

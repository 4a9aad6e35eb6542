#include "gammacap/rational.hpp"

#include "gammacap/geometry_io.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace gammacap {

namespace {

Polynomial multiplyLinear(const Polynomial& p, Complex root)
{
    // p(z) * (z - root)
    Polynomial out(p.size() + 1, Complex(0.0));
    for (std::size_t k = 0; k < p.size(); ++k) {
        out[k + 1] += p[k];
        out[k] -= root * p[k];
    }
    return out;
}

Polynomial subtract(const Polynomial& a, const Polynomial& b)
{
    Polynomial out(std::max(a.size(), b.size()), Complex(0.0));
    for (std::size_t k = 0; k < a.size(); ++k) {
        out[k] += a[k];
    }
    for (std::size_t k = 0; k < b.size(); ++k) {
        out[k] -= b[k];
    }
    return out;
}

Polynomial multiply(const Polynomial& a, const Polynomial& b)
{
    if (a.empty() || b.empty()) {
        return {};
    }
    Polynomial out(a.size() + b.size() - 1, Complex(0.0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            out[i + j] += a[i] * b[j];
        }
    }
    return out;
}

void trimLeading(Polynomial& p)
{
    double scale = 0.0;
    for (const Complex& c : p) {
        scale = std::max(scale, std::abs(c));
    }
    while (!p.empty() && std::abs(p.back()) <= 1e-14 * scale) {
        p.pop_back();
    }
}

/// Newton iteration for R(z) = w; returns false if it does not settle.
bool solveLevel(const RationalMap& map, Complex w, Complex& z)
{
    for (int iter = 0; iter < 60; ++iter) {
        const Complex step = (map(z) - w) / map.derivativeAt(z);
        z -= step;
        if (!isFinite(z)) {
            return false;
        }
        if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(z))) {
            return std::abs(map(z) - w) <= 1e-11 * std::max(1.0, std::abs(w));
        }
    }
    return std::abs(map(z) - w) <= 1e-11;
}

std::vector<Complex> levelRoots(const RationalMap& map, const Polynomial& num, const Polynomial& den, Complex w)
{
    Polynomial scaledDen = den;
    for (Complex& c : scaledDen) {
        c *= w;
    }
    auto roots = polynomialRoots(subtract(num, scaledDen));
    for (Complex& z : roots) {
        Complex polished = z;
        if (solveLevel(map, w, polished)) {
            z = polished;
        }
    }
    return roots;
}

/// Index of the nearest candidate to z, with an ambiguity check against the runner-up.
std::size_t nearestUnambiguous(Complex z, const std::vector<Complex>& candidates)
{
    std::size_t best = 0;
    double d1 = std::numeric_limits<double>::infinity();
    double d2 = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < candidates.size(); ++j) {
        const double d = std::abs(candidates[j] - z);
        if (d < d1) {
            d2 = d1;
            d1 = d;
            best = j;
        } else if (d < d2) {
            d2 = d;
        }
    }
    if (d1 > 0.5 * d2) {
        throw RefinementNeeded("ambiguous strand continuation");
    }
    return best;
}

class LevelCurve final : public TracedCurve {
public:
    LevelCurve(RationalMap map, std::vector<Complex> strand, int orientation)
        : map_(std::move(map)), strand_(std::move(strand)), orientation_(orientation)
    {
    }

    BoundaryPoint at(double t) const override
    {
        const auto samples = static_cast<double>(strand_.size() - 1);
        double u = orientation_ > 0 ? t : 1.0 - t;
        u -= std::floor(u);
        const auto k = static_cast<std::size_t>(std::lround(u * samples));
        const double tau = kTwoPi * u;
        const Complex w = std::polar(1.0, tau);
        const Complex zk = strand_[k];
        const double tauK = kTwoPi * static_cast<double>(k) / samples;
        // First-order predictor along the curve, then Newton.
        Complex z = zk + Complex(0.0, 1.0) * std::polar(1.0, tauK) / map_.derivativeAt(zk) * (tau - tauK);
        if (!solveLevel(map_, w, z)) {
            throw DomainError("level-curve Newton iteration failed");
        }
        const Complex dzdu = Complex(0.0, kTwoPi) * w / map_.derivativeAt(z);
        const Complex dzdt = orientation_ > 0 ? dzdu : -dzdu;
        const double speed = std::abs(dzdt);
        return BoundaryPoint{z, speed, dzdt / speed};
    }

private:
    RationalMap map_;
    std::vector<Complex> strand_;
    int orientation_;
};

double signedArea(const std::vector<Complex>& poly)
{
    double area = 0.0;
    for (std::size_t i = 0; i + 1 < poly.size(); ++i) {
        area += poly[i].real() * poly[i + 1].imag() - poly[i + 1].real() * poly[i].imag();
    }
    return 0.5 * area;
}

}  // namespace

Complex evalPolynomial(const Polynomial& p, Complex z)
{
    Complex acc;
    for (auto it = p.rbegin(); it != p.rend(); ++it) {
        acc = acc * z + *it;
    }
    return acc;
}

Polynomial derivative(const Polynomial& p)
{
    if (p.size() <= 1) {
        return {};
    }
    Polynomial d(p.size() - 1);
    for (std::size_t k = 1; k < p.size(); ++k) {
        d[k - 1] = p[k] * static_cast<double>(k);
    }
    return d;
}

std::vector<Complex> polynomialRoots(Polynomial p)
{
    trimLeading(p);
    if (p.size() <= 1) {
        return {};
    }
    const auto degree = static_cast<Eigen::Index>(p.size() - 1);
    std::vector<Complex> roots;
    if (degree == 1) {
        roots.push_back(-p[0] / p[1]);
        return roots;
    }
    CMatrix companion = CMatrix::Zero(degree, degree);
    for (Eigen::Index i = 1; i < degree; ++i) {
        companion(i, i - 1) = 1.0;
    }
    for (Eigen::Index i = 0; i < degree; ++i) {
        companion(i, degree - 1) = -p[static_cast<std::size_t>(i)] / p.back();
    }
    Eigen::ComplexEigenSolver<CMatrix> solver(companion, false);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("polynomial root finding did not converge");
    }
    const Polynomial dp = derivative(p);
    for (Eigen::Index i = 0; i < degree; ++i) {
        Complex z = solver.eigenvalues()(i);
        for (int iter = 0; iter < 3; ++iter) {
            const Complex d = evalPolynomial(dp, z);
            if (d == 0.0) {
                break;
            }
            const Complex next = z - evalPolynomial(p, z) / d;
            if (!isFinite(next)) {
                break;
            }
            z = next;
        }
        roots.push_back(z);
    }
    return roots;
}

void RationalMap::check() const
{
    if (poles.empty()) {
        throw InputError("rational map needs at least one pole");
    }
    if (poles.size() != residues.size()) {
        throw InputError("residue and pole counts differ");
    }
    for (std::size_t j = 0; j < poles.size(); ++j) {
        if (!isFinite(poles[j]) || !isFinite(residues[j])) {
            throw InputError("non-finite pole or residue");
        }
        if (residues[j] == 0.0) {
            throw InputError("residue " + std::to_string(j) + " is zero");
        }
        for (std::size_t k = j + 1; k < poles.size(); ++k) {
            if (poles[j] == poles[k]) {
                throw InputError("poles " + std::to_string(j) + " and " + std::to_string(k) + " coincide");
            }
        }
    }
}

Complex RationalMap::operator()(Complex z) const
{
    Complex sum;
    for (std::size_t j = 0; j < poles.size(); ++j) {
        sum += residues[j] / (z - poles[j]);
    }
    return sum;
}

Complex RationalMap::derivativeAt(Complex z) const
{
    Complex sum;
    for (std::size_t j = 0; j < poles.size(); ++j) {
        const Complex d = z - poles[j];
        sum -= residues[j] / (d * d);
    }
    return sum;
}

Complex RationalMap::sumResidues() const
{
    return std::accumulate(residues.begin(), residues.end(), Complex(0.0));
}

Polynomial RationalMap::numerator() const
{
    Polynomial total(poles.size(), Complex(0.0));
    for (std::size_t j = 0; j < poles.size(); ++j) {
        Polynomial term{residues[j]};
        for (std::size_t k = 0; k < poles.size(); ++k) {
            if (k != j) {
                term = multiplyLinear(term, poles[k]);
            }
        }
        for (std::size_t k = 0; k < term.size(); ++k) {
            total[k] += term[k];
        }
    }
    return total;
}

Polynomial RationalMap::denominator() const
{
    Polynomial q{Complex(1.0)};
    for (const Complex& p : poles) {
        q = multiplyLinear(q, p);
    }
    return q;
}

CriticalValueReport criticalValuesInDisk(const RationalMap& map)
{
    map.check();
    const Polynomial p = map.numerator();
    const Polynomial q = map.denominator();
    const Polynomial critical = subtract(multiply(derivative(p), q), multiply(p, derivative(q)));
    CriticalValueReport report;
    report.criticalPoints = polynomialRoots(critical);
    report.allInDisk = true;
    for (const Complex& c : report.criticalPoints) {
        const Complex value = map(c);
        report.criticalValues.push_back(value);
        if (!(std::abs(value) < 1.0)) {
            report.allInDisk = false;
        }
    }
    return report;
}

TracedBoundary traceBoundary(const RationalMap& map, int samples)
{
    map.check();
    if (samples < 8) {
        throw InputError("boundary tracing needs at least 8 samples");
    }
    const std::size_t n = map.degree();
    const Polynomial num = map.numerator();
    const Polynomial den = map.denominator();
    Complex centroid;
    for (const Complex& p : map.poles) {
        centroid += p;
    }
    centroid /= static_cast<double>(n);

    auto start = levelRoots(map, num, den, 1.0);
    if (start.size() != n) {
        throw DisconnectedLevelSet("level equation lost roots at t = 0");
    }
    std::sort(start.begin(), start.end(), [&](Complex a, Complex b) {
        const double aa = std::arg(a - centroid);
        const double ab = std::arg(b - centroid);
        if (aa != ab) {
            return aa < ab;
        }
        return std::abs(a - centroid) < std::abs(b - centroid);
    });

    TracedBoundary out;
    out.samples = samples;
    out.strands.assign(n, {});
    for (std::size_t k = 0; k < n; ++k) {
        out.strands[k].reserve(static_cast<std::size_t>(samples) + 1);
        out.strands[k].push_back(start[k]);
    }
    auto link = [&](const std::vector<Complex>& roots) {
        std::vector<std::size_t> chosen(n);
        std::vector<bool> used(roots.size(), false);
        for (std::size_t k = 0; k < n; ++k) {
            chosen[k] = nearestUnambiguous(out.strands[k].back(), roots);
            if (used[chosen[k]]) {
                throw RefinementNeeded("two strands continue to the same root");
            }
            used[chosen[k]] = true;
        }
        return chosen;
    };

    for (int i = 1; i < samples; ++i) {
        const auto roots = levelRoots(map, num, den, std::polar(1.0, kTwoPi * i / samples));
        if (roots.size() != n) {
            throw DisconnectedLevelSet("level equation lost roots");
        }
        const auto chosen = link(roots);
        for (std::size_t k = 0; k < n; ++k) {
            out.strands[k].push_back(roots[chosen[k]]);
        }
    }
    // Each strand must return to its own starting root after one turn.
    const auto closing = link(start);
    for (std::size_t k = 0; k < n; ++k) {
        if (closing[k] != k) {
            throw DisconnectedLevelSet("strand " + std::to_string(k) + " does not close after one turn");
        }
        out.strands[k].push_back(start[k]);
    }
    return out;
}

TracedBoundary traceBoundaryRefined(const RationalMap& map, int samples, int maxSamples)
{
    for (int s = samples;; s *= 2) {
        try {
            return traceBoundary(map, s);
        } catch (const RefinementNeeded&) {
            if (s * 2 > maxSamples) {
                throw;
            }
        }
    }
}

CompactSet levelSetCompact(const RationalMap& map, const TracedBoundary& boundary)
{
    CompactSet set;
    for (const auto& strand : boundary.strands) {
        std::vector<std::size_t> enclosed;
        const std::span<const Complex> polygon(strand.data(), strand.size() - 1);
        for (std::size_t j = 0; j < map.poles.size(); ++j) {
            if (windingNumber(polygon, map.poles[j]) != 0) {
                enclosed.push_back(j);
            }
        }
        if (enclosed.size() != 1) {
            throw DisconnectedLevelSet("a level curve does not enclose exactly one pole");
        }
        const int orientation = signedArea(strand) > 0.0 ? 1 : -1;
        set.components.push_back(BoundaryComponent::traced(std::make_shared<LevelCurve>(map, strand, orientation)));
        set.anchors.push_back(map.poles[enclosed.front()]);
    }
    return set;
}

const char* toString(AhlforsVerdict verdict)
{
    switch (verdict) {
    case AhlforsVerdict::Ahlfors:
        return "consistent-with-Ahlfors";
    case AhlforsVerdict::NotAhlfors:
        return "not-Ahlfors";
    case AhlforsVerdict::Inconclusive:
        return "inconclusive";
    }
    return "unknown";
}

AhlforsReport verifyAhlfors(const RationalMap& map, const SolverConfig& solver, int samples)
{
    const auto critical = criticalValuesInDisk(map);
    if (!critical.allInDisk) {
        throw DisconnectedLevelSet("a critical value of R lies outside the unit disk");
    }
    const TracedBoundary boundary = traceBoundaryRefined(map, samples);
    const CompactSet set = levelSetCompact(map, boundary);

    SolverConfig cfg = solver;
    cfg.family = BasisFamily::MultiPoleAtAnchors;
    cfg.firstStage = std::max(1, cfg.firstStage);
    const BoundsRun run = computeBounds(set, cfg);

    AhlforsReport report;
    report.stages = run.stages;
    report.samples = boundary.samples;
    report.sumResidues = map.sumResidues();
    report.lower = run.last().lower;
    report.upper = run.last().upper;
    const double gap = report.upper - report.lower;
    report.tolerance = std::max(gap, 10.0 * cfg.quadrature.absTol);
    const double tau = report.tolerance;
    const Complex s = report.sumResidues;
    const double target = std::abs(s);

    if (std::abs(s.imag()) > tau || s.real() <= 0.0 || report.lower > target + tau || report.upper < target - tau) {
        report.verdict = AhlforsVerdict::NotAhlfors;
    } else if (target >= report.lower - tau && target <= report.upper + tau && gap < 10.0 * target * 1e-6) {
        report.verdict = AhlforsVerdict::Ahlfors;
    } else {
        report.verdict = AhlforsVerdict::Inconclusive;
    }
    return report;
}

RationalMap realSymmetricMap(std::span<const double> residues, std::span<const double> poles)
{
    if (residues.size() != poles.size() || poles.empty()) {
        throw InputError("residue and pole counts differ");
    }
    RationalMap map;
    for (std::size_t j = 0; j < poles.size(); ++j) {
        if (!(residues[j] > 0.0)) {
            throw InputError("real-symmetric family needs positive residues");
        }
        map.residues.emplace_back(residues[j]);
        map.poles.emplace_back(poles[j]);
    }
    map.check();
    return map;
}

RationalMap rotationalMap(int n, double a)
{
    if (n < 2) {
        throw InputError("rotational family needs n >= 2");
    }
    const double bound = n * std::pow(static_cast<double>(n - 1), static_cast<double>(1 - n) / n);
    if (!(a > 0.0 && a < bound)) {
        throw InputError("rotational family needs 0 < a < " + std::to_string(bound));
    }
    RationalMap map;
    for (int k = 0; k < n; ++k) {
        map.poles.push_back(std::polar(1.0, kTwoPi * k / n));
        map.residues.emplace_back(a / n);
    }
    return map;
}

RationalMap rationalMapFromJson(const nlohmann::json& doc)
{
    if (!doc.is_object()) {
        throw SchemaError("/", "expected an object");
    }
    auto readValue = [](const nlohmann::json& node, const std::string& where) {
        if (node.is_number()) {
            return Complex(node.get<double>(), 0.0);
        }
        return parsePoint(node, where);
    };
    if (doc.contains("family")) {
        if (!doc.at("family").is_string()) {
            throw SchemaError("/family", "expected a string");
        }
        const auto family = doc.at("family").get<std::string>();
        if (family == "rotational") {
            if (!doc.contains("n") || !doc.at("n").is_number_integer() || !doc.contains("a") || !doc.at("a").is_number()) {
                throw SchemaError("/", "rotational family needs integer \"n\" and number \"a\"");
            }
            return rotationalMap(doc.at("n").get<int>(), doc.at("a").get<double>());
        }
        if (family != "real-symmetric") {
            throw SchemaError("/family", "unknown family \"" + family + "\"");
        }
    }
    if (!doc.contains("residues") || !doc.contains("poles") || !doc.at("residues").is_array() ||
        !doc.at("poles").is_array()) {
        throw SchemaError("/", "expected \"residues\" and \"poles\" arrays");
    }
    RationalMap map;
    const auto& res = doc.at("residues");
    const auto& pol = doc.at("poles");
    for (std::size_t j = 0; j < res.size(); ++j) {
        map.residues.push_back(readValue(res[j], "/residues/" + std::to_string(j)));
    }
    for (std::size_t j = 0; j < pol.size(); ++j) {
        map.poles.push_back(readValue(pol[j], "/poles/" + std::to_string(j)));
    }
    if (doc.contains("family")) {
        std::vector<double> a;
        std::vector<double> p;
        for (std::size_t j = 0; j < map.poles.size(); ++j) {
            if (map.poles[j].imag() != 0.0 || map.residues[j].imag() != 0.0) {
                throw SchemaError("/", "real-symmetric family needs real poles and residues");
            }
            p.push_back(map.poles[j].real());
        }
        for (const Complex& r : map.residues) {
            a.push_back(r.real());
        }
        return realSymmetricMap(a, p);
    }
    try {
        map.check();
    } catch (const InputError& e) {
        throw SchemaError("/", e.what());
    }
    return map;
}

nlohmann::json rationalMapToJson(const RationalMap& map)
{
    nlohmann::json res = nlohmann::json::array();
    nlohmann::json pol = nlohmann::json::array();
    for (std::size_t j = 0; j < map.poles.size(); ++j) {
        res.push_back(pointToJson(map.residues[j]));
        pol.push_back(pointToJson(map.poles[j]));
    }
    return {{"residues", res}, {"poles", pol}};
}

}  // namespace gammacap

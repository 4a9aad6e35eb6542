#include "gammacap/subadditivity.hpp"

#include "gammacap/geometry_io.hpp"
#include "gammacap/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

namespace gammacap {

namespace {

double unitUniform(std::mt19937_64& gen)
{
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

CapacityBounds finalBracket(const std::vector<Complex>& centers, double r, const SolverConfig& solver)
{
    return computeBounds(diskUnion(centers, r), solver).last();
}

}  // namespace

std::vector<Complex> DiskPairConfig::allCenters() const
{
    std::vector<Complex> all = centersE;
    all.insert(all.end(), centersF.begin(), centersF.end());
    return all;
}

double DiskPairConfig::delta() const
{
    const auto all = allCenters();
    return minPairwiseGap(all);
}

void DiskPairConfig::check() const
{
    if (centersE.empty() || centersF.empty()) {
        throw InputError("both E and F need at least one center");
    }
    const double d = delta();
    for (double r : rGrid) {
        if (!(r > 0.0 && r < 0.5 * d)) {
            throw InputError("radius " + fmt(r) + " outside (0, delta/2) with delta = " + fmt(d));
        }
    }
}

std::vector<double> defaultRadiusGrid(double delta, int steps)
{
    if (steps < 1) {
        throw InputError("radius grid needs at least one step");
    }
    const double first = delta / 1000.0;
    const double last = 0.499 * delta;
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(steps));
    if (steps == 1) {
        grid.push_back(last);
        return grid;
    }
    for (int i = 0; i < steps; ++i) {
        grid.push_back(first + (last - first) * i / (steps - 1));
    }
    return grid;
}

std::vector<RatioPoint> ratioSweep(const DiskPairConfig& cfg, const SolverConfig& solver)
{
    cfg.check();
    solver.check();
    const auto all = cfg.allCenters();
    std::vector<RatioPoint> points(cfg.rGrid.size());
    parallelFor(points.size(), [&](std::size_t i) {
        RatioPoint& pt = points[i];
        pt.r = cfg.rGrid[i];
        try {
            pt.unionBounds = finalBracket(all, pt.r, solver);
            pt.boundsE = finalBracket(cfg.centersE, pt.r, solver);
            pt.boundsF = finalBracket(cfg.centersF, pt.r, solver);
            const double parts = pt.boundsE.upper + pt.boundsF.upper;
            const double partsLow = pt.boundsE.lower + pt.boundsF.lower;
            if (!(partsLow > 0.0)) {
                throw SolveError("zero lower bound for gamma(E) + gamma(F)");
            }
            pt.ratioLower = pt.unionBounds.lower / parts;
            pt.ratioUpper = pt.unionBounds.upper / partsLow;
            pt.valid = true;
        } catch (const std::exception& e) {
            pt.valid = false;
            pt.error = e.what();
        }
    });
    std::stable_sort(points.begin(), points.end(), [](const RatioPoint& a, const RatioPoint& b) { return a.r < b.r; });
    return points;
}

AsymptoticFitResult asymptoticFit(std::span<const RatioPoint> points, double rMax)
{
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& p : points) {
        if (p.valid && p.r > 0.0 && p.r <= rMax) {
            const double mid = 0.5 * (p.ratioLower + p.ratioUpper);
            xs.push_back(p.r);
            ys.push_back((1.0 - mid) / (p.r * p.r));
        }
    }
    if (xs.size() < 3) {
        throw InputError("asymptotic fit needs at least 3 points with r <= rMax");
    }
    const auto n = static_cast<double>(xs.size());
    double sx = 0.0;
    double sy = 0.0;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double det = n * sxx - sx * sx;
    AsymptoticFitResult fit;
    fit.pointsUsed = xs.size();
    fit.slope = det != 0.0 ? (n * sxy - sx * sy) / det : 0.0;
    fit.C = (sy - fit.slope * sx) / n;
    double ss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double e = ys[i] - (fit.C + fit.slope * xs[i]);
        ss += e * e;
    }
    fit.residual = fit.C != 0.0 ? std::sqrt(ss / n) / std::abs(fit.C) : std::sqrt(ss / n);
    return fit;
}

std::vector<MonotonicityViolation> monotonicityScan(std::span<const RatioPoint> points)
{
    std::vector<MonotonicityViolation> out;
    const RatioPoint* prev = nullptr;
    for (const auto& p : points) {
        if (!p.valid) {
            continue;
        }
        if (prev != nullptr && p.ratioLower > prev->ratioUpper) {
            out.push_back({prev->r, p.r, prev->ratioUpper, p.ratioLower});
        }
        prev = &p;
    }
    return out;
}

double maxRatioUpper(std::span<const RatioPoint> points)
{
    double best = 0.0;
    for (const auto& p : points) {
        if (p.valid) {
            best = std::max(best, p.ratioUpper);
        }
    }
    return best;
}

std::vector<Complex> randomCenters(int count, double side, double minGap, std::uint64_t seed)
{
    if (count < 2 || !(side > 0.0) || !(minGap > 0.0)) {
        throw InputError("random centers need count >= 2, side > 0 and minGap > 0");
    }
    std::mt19937_64 gen(seed);
    std::vector<Complex> centers;
    const long long maxAttempts = 10000LL * count;
    for (long long attempt = 0; static_cast<int>(centers.size()) < count; ++attempt) {
        if (attempt >= maxAttempts) {
            throw InputError("could not place random centers with the requested gap");
        }
        const double x = side * unitUniform(gen);
        const double y = side * unitUniform(gen);
        const Complex z(x, y);
        const bool clear =
            std::all_of(centers.begin(), centers.end(), [&](Complex c) { return std::abs(c - z) >= minGap; });
        if (clear) {
            centers.push_back(z);
        }
    }
    const double delta = minPairwiseGap(centers);
    for (Complex& c : centers) {
        c /= delta;
    }
    return centers;
}

DiskPairConfig randomPairConfig(int n, int m, double side, std::uint64_t seed)
{
    if (n < 1 || m < 1) {
        throw InputError("random pair configuration needs n, m >= 1");
    }
    const auto centers = randomCenters(n + m, side, 1.0, seed);
    DiskPairConfig cfg;
    cfg.centersE.assign(centers.begin(), centers.begin() + n);
    cfg.centersF.assign(centers.begin() + n, centers.end());
    return cfg;
}

void writeSweepCsv(std::ostream& out, std::span<const RatioPoint> points)
{
    out << "r,ratio_lower,ratio_upper,gamma_union_lower,gamma_union_upper,gamma_E_lower,gamma_E_upper,"
           "gamma_F_lower,gamma_F_upper\n";
    for (const auto& p : points) {
        out << fmt(p.r);
        if (p.valid) {
            for (double v : {p.ratioLower, p.ratioUpper, p.unionBounds.lower, p.unionBounds.upper, p.boundsE.lower,
                             p.boundsE.upper, p.boundsF.lower, p.boundsF.upper}) {
                out << ',' << fmt(v);
            }
        } else {
            out << ",,,,,,,,";
        }
        out << '\n';
    }
}

DiskPairConfig pairConfigFromJson(const nlohmann::json& doc, std::optional<std::uint64_t> seedOverride)
{
    if (!doc.is_object()) {
        throw SchemaError("/", "expected an object");
    }
    if (doc.contains("random")) {
        const auto& r = doc.at("random");
        if (!r.is_object() || !r.contains("n") || !r.contains("m") || !r.at("n").is_number_integer() ||
            !r.at("m").is_number_integer()) {
            throw SchemaError("/random", "needs integer \"n\" and \"m\"");
        }
        const double side = r.contains("side") && r.at("side").is_number() ? r.at("side").get<double>() : 8.0;
        std::uint64_t seed = r.contains("seed") && r.at("seed").is_number_unsigned() ? r.at("seed").get<std::uint64_t>() : 1;
        if (seedOverride) {
            seed = *seedOverride;
        }
        return randomPairConfig(r.at("n").get<int>(), r.at("m").get<int>(), side, seed);
    }
    if (!doc.contains("E") || !doc.contains("F") || !doc.at("E").is_array() || !doc.at("F").is_array()) {
        throw SchemaError("/", "expected \"E\" and \"F\" center arrays or a \"random\" block");
    }
    DiskPairConfig cfg;
    for (std::size_t i = 0; i < doc.at("E").size(); ++i) {
        cfg.centersE.push_back(parsePoint(doc.at("E")[i], "/E/" + std::to_string(i)));
    }
    for (std::size_t i = 0; i < doc.at("F").size(); ++i) {
        cfg.centersF.push_back(parsePoint(doc.at("F")[i], "/F/" + std::to_string(i)));
    }
    if (cfg.centersE.empty() || cfg.centersF.empty()) {
        throw SchemaError("/", "E and F need at least one center each");
    }
    return cfg;
}

}  // namespace gammacap

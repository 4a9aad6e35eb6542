#include "gammacap/cli.hpp"

#include "gammacap/capacity.hpp"
#include "gammacap/geometry_io.hpp"
#include "gammacap/rational.hpp"
#include "gammacap/subadditivity.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>
#include <vector>

namespace gammacap {

using json = nlohmann::ordered_json;

std::uint64_t fnv1a(std::string_view bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hexDigest(std::uint64_t digest)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(digest));
    return buf;
}

json RunManifest::toJson() const
{
    return json{{"command", command},   {"input_digest", inputDigest}, {"config", config},
                {"stages", stages},     {"elapsed_s", elapsedSeconds}, {"tool_version", toolVersion}};
}

double round15(double v)
{
    if (!std::isfinite(v)) {
        return v;
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return std::strtod(buf, nullptr);
}

namespace {

using Clock = std::chrono::steady_clock;

std::string readFile(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot open " + path);
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

json parseDocument(const std::string& text, const std::string& path)
{
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError(path, std::string("malformed JSON (") + e.what() + ")");
    }
}

std::string fixed15(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15f", v);
    return buf;
}

std::string sig15(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

json stageJson(const CapacityBounds& b)
{
    return json{{"stage", b.stage},
                {"basis_size", b.basisSize},
                {"lower", round15(b.lower)},
                {"upper", round15(b.upper)},
                {"condition", round15(b.conditionEstimate)}};
}

json stagesJson(const std::vector<CapacityBounds>& stages)
{
    json arr = json::array();
    for (const auto& b : stages) {
        arr.push_back(stageJson(b));
    }
    return arr;
}

json stagesWithTiming(const std::vector<CapacityBounds>& stages)
{
    json arr = stagesJson(stages);
    for (std::size_t i = 0; i < stages.size(); ++i) {
        arr[i]["elapsed_s"] = stages[i].elapsedSeconds;
    }
    return arr;
}

void writeTable(std::ostream& out, const std::vector<CapacityBounds>& stages)
{
    char line[160];
    std::snprintf(line, sizeof line, "%5s %6s  %-19s %-19s %10s\n", "stage", "basis", "lower", "upper", "time(s)");
    out << line;
    for (const auto& b : stages) {
        std::snprintf(line, sizeof line, "%5d %6zu  %-19s %-19s %10.6f\n", b.stage, b.basisSize,
                      fixed15(b.lower).c_str(), fixed15(b.upper).c_str(), b.elapsedSeconds);
        out << line;
    }
}

void writeManifest(const std::string& path, const RunManifest& manifest)
{
    std::ofstream f(path);
    if (!f) {
        throw InputError("cannot write manifest " + path);
    }
    f << manifest.toJson().dump(2) << '\n';
}

json solverJson(const SolverConfig& s)
{
    const char* family = s.family == BasisFamily::PoleRings       ? "pole-rings"
                         : s.family == BasisFamily::CornerAdapted ? "corner"
                                                                  : "monomial";
    return json{{"family", family},
                {"first_stage", s.firstStage},
                {"max_stage", s.maxStage},
                {"gap_target", s.gapTarget},
                {"quad_abs_tol", s.quadrature.absTol},
                {"quad_rel_tol", s.quadrature.relTol},
                {"condition_limit", s.conditionLimit}};
}

struct CapacityOptions {
    std::string file;
    std::optional<int> rings;
    std::optional<int> n;
    std::optional<int> k;
    bool cornerBasis = false;
    bool monomial = false;
    std::optional<int> first;
    double gapTarget = 1e-13;
    double quadTol = 1e-9;
    std::string emit = "table";
    std::string manifest;
};

int cmdCapacity(const CapacityOptions& o, std::ostream& out, std::ostream& err)
{
    const auto t0 = Clock::now();
    const std::string text = readFile(o.file);
    const CompactSet set = geometryFromJson(parseDocument(text, o.file));

    SolverConfig solver;
    solver.gapTarget = o.gapTarget;
    solver.quadrature.absTol = o.quadTol;
    if (o.cornerBasis) {
        solver.family = BasisFamily::CornerAdapted;
        solver.maxStage = o.n.value_or(6);
        solver.firstStage = o.first.value_or(std::min(2, solver.maxStage));
    } else if (o.monomial) {
        solver.family = BasisFamily::MultiPoleAtAnchors;
        solver.maxStage = o.k.value_or(10);
        solver.firstStage = o.first.value_or(1);
    } else {
        solver.family = BasisFamily::PoleRings;
        solver.maxStage = o.rings.value_or(4);
        solver.firstStage = o.first.value_or(0);
    }
    solver.check();

    BoundsRun run;
    int code = kExitOk;
    try {
        run = computeBounds(set, solver);
    } catch (const CapacityError& e) {
        err << "error: " << e.what() << '\n';
        if (e.lastGood()) {
            err << "last completed stage " << e.lastGood()->stage << ": [" << sig15(e.lastGood()->lower) << ", "
                << sig15(e.lastGood()->upper) << "]\n";
        }
        return kExitError;
    }
    if (run.reason != StopReason::GapTargetMet) {
        code = kExitNotConverged;
    }

    std::ostringstream buf;
    if (o.emit == "table") {
        writeTable(buf, run.stages);
    } else if (o.emit == "csv") {
        buf << "stage,basis_size,lower,upper\n";
        for (const auto& b : run.stages) {
            buf << b.stage << ',' << b.basisSize << ',' << sig15(b.lower) << ',' << sig15(b.upper) << '\n';
        }
    } else {
        json doc{{"stages", stagesJson(run.stages)}, {"stop_reason", toString(run.reason)}};
        buf << doc.dump(2) << '\n';
    }
    out << buf.str();
    err << "stop: " << toString(run.reason);
    if (!run.note.empty()) {
        err << " (" << run.note << ")";
    }
    err << '\n';

    if (!o.manifest.empty()) {
        RunManifest m;
        m.command = "capacity";
        m.inputDigest = hexDigest(fnv1a(text));
        m.config = solverJson(solver);
        m.config["input"] = o.file;
        m.stages = stagesWithTiming(run.stages);
        m.elapsedSeconds = std::chrono::duration<double>(Clock::now() - t0).count();
        writeManifest(o.manifest, m);
    }
    return code;
}

struct SubaddOptions {
    std::string file;
    int rSteps = 500;
    std::optional<std::uint64_t> seed;
    int maxStage = 4;
    double fitRMax = 0.05;
    std::string emit = "csv";
    std::string out;
    std::string manifest;
};

int cmdSubadd(const SubaddOptions& o, std::ostream& out, std::ostream& err)
{
    const auto t0 = Clock::now();
    if (o.rSteps < 1) {
        throw InputError("--r-steps must be at least 1");
    }
    const std::string text = readFile(o.file);
    DiskPairConfig cfg = pairConfigFromJson(parseDocument(text, o.file), o.seed);
    cfg.rGrid = defaultRadiusGrid(cfg.delta(), o.rSteps);

    SolverConfig solver;
    solver.maxStage = o.maxStage;
    solver.check();
    const auto points = ratioSweep(cfg, solver);

    std::ostringstream buf;
    if (o.emit == "csv") {
        writeSweepCsv(buf, points);
    } else {
        json arr = json::array();
        for (const auto& p : points) {
            json row{{"r", round15(p.r)}, {"valid", p.valid}};
            if (p.valid) {
                row["ratio_lower"] = round15(p.ratioLower);
                row["ratio_upper"] = round15(p.ratioUpper);
            } else {
                row["error"] = p.error;
            }
            arr.push_back(row);
        }
        buf << json{{"points", arr}}.dump(2) << '\n';
    }
    if (o.out.empty()) {
        out << buf.str();
    } else {
        std::ofstream f(o.out);
        if (!f) {
            throw InputError("cannot write " + o.out);
        }
        f << buf.str();
    }

    std::size_t invalid = 0;
    double maxGap = 0.0;
    for (const auto& p : points) {
        if (!p.valid) {
            ++invalid;
        } else {
            maxGap = std::max(maxGap, p.gap());
        }
    }
    err << "points: " << points.size() << " (" << invalid << " failed)\n";
    err << "max certified ratio upper bound: " << sig15(maxRatioUpper(points)) << '\n';
    err << "max ratio bracket gap: " << sig15(maxGap) << '\n';
    try {
        const auto fit = asymptoticFit(points, o.fitRMax * cfg.delta());
        err << "asymptotic fit (1-R)/r^2 ~ C + s r: C = " << sig15(fit.C) << ", s = " << sig15(fit.slope)
            << ", residual " << sig15(fit.residual) << " over " << fit.pointsUsed << " points\n";
    } catch (const InputError& e) {
        err << "asymptotic fit skipped: " << e.what() << '\n';
    }
    const auto violations = monotonicityScan(points);
    if (violations.empty()) {
        err << "monotonicity: no certified increase\n";
    } else {
        err << "MONOTONICITY VIOLATION: " << violations.size() << " certified increase(s)\n";
        for (const auto& v : violations) {
            err << "  r " << sig15(v.rFrom) << " -> " << sig15(v.rTo) << ": upper " << sig15(v.upperAtFrom)
                << " < lower " << sig15(v.lowerAtTo) << '\n';
        }
    }

    if (!o.manifest.empty()) {
        RunManifest m;
        m.command = "subadd";
        m.inputDigest = hexDigest(fnv1a(text));
        m.config = solverJson(solver);
        m.config["input"] = o.file;
        m.config["r_steps"] = o.rSteps;
        if (o.seed) {
            m.config["seed"] = *o.seed;
        }
        m.stages = json::array();
        m.elapsedSeconds = std::chrono::duration<double>(Clock::now() - t0).count();
        writeManifest(o.manifest, m);
    }
    return kExitOk;
}

struct RationalOptions {
    std::string file;
    std::optional<int> degree;
    int samples = 512;
    std::string emit = "json";
    std::string manifest;
};

json complexJson(Complex z)
{
    return json::array({round15(z.real()), round15(z.imag())});
}

int cmdRational(const RationalOptions& o, std::ostream& out, std::ostream& err)
{
    const auto t0 = Clock::now();
    const std::string text = readFile(o.file);
    const json doc = parseDocument(text, o.file);
    const RationalMap map = rationalMapFromJson(doc);
    int degree = 3;
    if (o.degree) {
        degree = *o.degree;
    } else if (doc.contains("degree") && doc.at("degree").is_number_integer()) {
        degree = doc.at("degree").get<int>();
    }
    if (degree < 1) {
        throw InputError("--degree must be at least 1");
    }
    if (o.samples < 8) {
        throw InputError("--samples must be at least 8");
    }

    const auto critical = criticalValuesInDisk(map);
    if (!critical.allInDisk) {
        json values = json::array();
        for (Complex w : critical.criticalValues) {
            values.push_back(complexJson(w));
        }
        out << json{{"error", "disconnected-level-set"},
                    {"message", "a critical value lies outside the open unit disk"},
                    {"critical_values", values}}
                   .dump(2)
            << '\n';
        return kExitDisconnected;
    }

    SolverConfig solver;
    solver.family = BasisFamily::MultiPoleAtAnchors;
    solver.firstStage = 1;
    solver.maxStage = degree;
    solver.gapTarget = 1e-14;
    solver.check();
    const AhlforsReport report = verifyAhlfors(map, solver, o.samples);

    std::ostringstream buf;
    if (o.emit == "table") {
        writeTable(buf, report.stages);
        buf << "sum of residues: " << sig15(report.sumResidues.real());
        if (report.sumResidues.imag() != 0.0) {
            buf << (report.sumResidues.imag() < 0 ? " - " : " + ") << sig15(std::abs(report.sumResidues.imag()))
                << "i";
        }
        buf << "\nverdict: " << toString(report.verdict) << '\n';
    } else {
        json verdict{{"verdict", toString(report.verdict)},
                     {"sum_residues", complexJson(report.sumResidues)},
                     {"lower", round15(report.lower)},
                     {"upper", round15(report.upper)},
                     {"stages", stagesJson(report.stages)}};
        buf << verdict.dump(2) << '\n';
    }
    out << buf.str();
    err << "boundary samples: " << report.samples << ", tolerance " << sig15(report.tolerance) << '\n';

    if (!o.manifest.empty()) {
        RunManifest m;
        m.command = "rational";
        m.inputDigest = hexDigest(fnv1a(text));
        m.config = solverJson(solver);
        m.config["input"] = o.file;
        m.config["samples"] = report.samples;
        m.stages = stagesWithTiming(report.stages);
        m.elapsedSeconds = std::chrono::duration<double>(Clock::now() - t0).count();
        writeManifest(o.manifest, m);
    }
    return kExitOk;
}

}  // namespace

int runCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Certified bounds for analytic capacity"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    CapacityOptions cap;
    auto* capCmd = app.add_subcommand("capacity", "Bracket the analytic capacity of a compact set");
    capCmd->add_option("geometry", cap.file, "Geometry JSON file")->required();
    auto* ringsOpt = capCmd->add_option("--rings", cap.rings, "Last pole-ring stage (default 4)");
    auto* cornerFlag = capCmd->add_flag("--corner-basis", cap.cornerBasis, "Use the corner-adapted basis");
    auto* monoFlag = capCmd->add_flag("--monomial", cap.monomial, "Use powers of 1/(z - anchor)");
    capCmd->add_option("--n", cap.n, "Last corner-basis degree (default 6)")->needs(cornerFlag);
    capCmd->add_option("--k", cap.k, "Last monomial power (default 10)")->needs(monoFlag);
    capCmd->add_option("--first", cap.first, "First stage of the schedule");
    capCmd->add_option("--gap-target", cap.gapTarget, "Stop once upper - lower is at most this")
        ->check(CLI::PositiveNumber);
    capCmd->add_option("--quad-tol", cap.quadTol, "Absolute quadrature tolerance")->check(CLI::PositiveNumber);
    capCmd->add_option("--emit", cap.emit, "Output format")->check(CLI::IsMember({"table", "csv", "json"}));
    capCmd->add_option("--manifest", cap.manifest, "Write a run manifest to this file");
    cornerFlag->excludes(monoFlag);
    ringsOpt->excludes(cornerFlag)->excludes(monoFlag);

    SubaddOptions sub;
    auto* subCmd = app.add_subcommand("subadd", "Sweep the subadditivity ratio over disk radii");
    subCmd->add_option("config", sub.file, "Centers JSON file")->required();
    subCmd->add_option("--r-steps", sub.rSteps, "Number of radii (default 500)")->check(CLI::PositiveNumber);
    subCmd->add_option("--seed", sub.seed, "Seed for random configurations");
    subCmd->add_option("--max-stage", sub.maxStage, "Last pole-ring stage per solve (default 4)")
        ->check(CLI::NonNegativeNumber);
    subCmd->add_option("--fit-rmax", sub.fitRMax, "Largest r/delta used by the asymptotic fit")
        ->check(CLI::PositiveNumber);
    subCmd->add_option("--emit", sub.emit, "Output format")->check(CLI::IsMember({"csv", "json"}));
    subCmd->add_option("--out", sub.out, "Write the sweep here instead of stdout");
    subCmd->add_option("--manifest", sub.manifest, "Write a run manifest to this file");

    RationalOptions rat;
    auto* ratCmd = app.add_subcommand("rational", "Test whether a rational map is an Ahlfors function");
    ratCmd->add_option("map", rat.file, "Rational map JSON file")->required();
    ratCmd->add_option("--degree", rat.degree, "Highest multipole order (default: file's \"degree\" or 3)");
    ratCmd->add_option("--samples", rat.samples, "Boundary samples per strand (default 512)");
    ratCmd->add_option("--emit", rat.emit, "Output format")->check(CLI::IsMember({"json", "table"}));
    ratCmd->add_option("--manifest", rat.manifest, "Write a run manifest to this file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForVersion&) {
        out << kToolVersion << '\n';
        return kExitOk;
    } catch (const CLI::Success&) {
        out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitError;
    }

    try {
        if (*capCmd) {
            return cmdCapacity(cap, out, err);
        }
        if (*subCmd) {
            return cmdSubadd(sub, out, err);
        }
        return cmdRational(rat, out, err);
    } catch (const SchemaError& e) {
        err << "schema error: " << e.what() << '\n';
    } catch (const DisconnectedLevelSet& e) {
        err << "error: " << e.what() << '\n';
        return kExitDisconnected;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
    }
    return kExitError;
}

}  // namespace gammacap

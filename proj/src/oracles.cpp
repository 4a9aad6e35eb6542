#include "gammacap/oracles.hpp"

#include "gammacap/types.hpp"

#include <cmath>

namespace gammacap {

long double unitCrossSquareCapacity()
{
    const long double pi = 3.14159265358979323846264338327950288L;
    return std::sqrt(2.0L) * kGammaQuarter * kGammaQuarter / (4.0L * pi * std::sqrt(pi));
}

ReferenceValue knownCapacity(const std::string& name, double parameter)
{
    if (name == "disk") {
        if (!(parameter > 0.0)) {
            throw InputError("disk radius must be positive");
        }
        return {name, static_cast<long double>(parameter), Provenance::ClosedForm};
    }
    if (name == "segment") {
        if (!(parameter > 0.0)) {
            throw InputError("segment length must be positive");
        }
        return {name, static_cast<long double>(parameter) / 4.0L, Provenance::ClosedForm};
    }
    if (name == "two-unit-disks-pm2") {
        // Elliptic-integral evaluation for two unit disks centered at -2 and 2.
        return {name, 1.8755950190971197289L, Provenance::PublishedConstant};
    }
    if (name == "unit-cross-square") {
        return {name, unitCrossSquareCapacity(), Provenance::ClosedForm};
    }
    throw InputError("unknown reference case \"" + name + "\"");
}

std::vector<std::string> knownCases()
{
    return {"disk", "segment", "two-unit-disks-pm2", "unit-cross-square"};
}

}  // namespace gammacap

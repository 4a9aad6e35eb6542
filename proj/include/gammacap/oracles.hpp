#pragma once

#include <string>
#include <vector>

namespace gammacap {

enum class Provenance { ClosedForm, PublishedConstant };

struct ReferenceValue {
    std::string name;
    long double value = 0.0L;
    Provenance provenance = Provenance::ClosedForm;
};

/// Gamma(1/4) to 30 significant digits, from Gamma(1/4)^2 = (2 pi)^(3/2) / AGM(sqrt 2, 1);
/// the AGM converges quadratically, five iterations in 40-digit arithmetic suffice.
inline constexpr long double kGammaQuarter = 3.62560990822190831193068515587L;

/// Capacity of the square with corners 1, i, -1, -i: sqrt(2) Gamma(1/4)^2 / (4 pi^(3/2)).
long double unitCrossSquareCapacity();

/// Registered cases: "disk" (uses `parameter` as radius), "segment" (parameter = length),
/// "two-unit-disks-pm2", "unit-cross-square". Throws InputError for unknown names.
ReferenceValue knownCapacity(const std::string& name, double parameter = 1.0);

std::vector<std::string> knownCases();

}  // namespace gammacap

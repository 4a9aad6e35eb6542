#pragma once

#include "gammacap/geometry.hpp"

#include <vector>

namespace testsupport {

using gammacap::BoundaryComponent;
using gammacap::Complex;
using gammacap::CompactSet;

inline CompactSet twoDisks()
{
    return CompactSet({BoundaryComponent::circle({-2, 0}, 1), BoundaryComponent::circle({2, 0}, 1)});
}

// Square with corners 1, i, -1, -i.
inline CompactSet crossSquare()
{
    const Complex v[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    std::vector<gammacap::Piece> pieces;
    std::vector<gammacap::Corner> corners;
    for (int k = 0; k < 4; ++k) {
        pieces.emplace_back(gammacap::LinePiece{v[k], v[(k + 1) % 4]});
        corners.push_back({v[k], gammacap::kPi / 2});
    }
    return CompactSet({BoundaryComponent::piecewise(pieces, corners)});
}

inline CompactSet fourEllipses()
{
    return CompactSet({BoundaryComponent::ellipse({-3, 0}, 2, 1), BoundaryComponent::ellipse({3, 0}, 2, 1),
                       BoundaryComponent::ellipse({0, 10}, 2, 1), BoundaryComponent::ellipse({0, -10}, 2, 1)});
}

}  // namespace testsupport

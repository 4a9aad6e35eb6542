#pragma once

#include "gammacap/geometry.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace gammacap {

/// Schema violation in an input document; `where` is a JSON-pointer-like path.
class SchemaError : public InputError {
public:
    SchemaError(std::string where, const std::string& what)
        : InputError(where + ": " + what), where_(std::move(where))
    {
    }
    const std::string& where() const noexcept { return where_; }

private:
    std::string where_;
};

/// Reads a point written as [re, im].
Complex parsePoint(const nlohmann::json& node, const std::string& where);
nlohmann::json pointToJson(Complex z);

/// Geometry document:
///   {"components": [
///      {"type": "circle",  "center": [re, im], "radius": r},
///      {"type": "ellipse", "center": [re, im], "a": a, "b": b, "rot": radians},
///      {"type": "polyarcs",
///       "segments": [{"type": "line", "from": [..], "to": [..]},
///                    {"type": "arc", "center": [..], "radius": r, "start": radians, "sweep": radians}],
///       "corners": [{"vertex": [..], "angle": radians}]}
///   ]}
/// Every component may carry an optional "anchor": [re, im].
CompactSet geometryFromJson(const nlohmann::json& doc);
nlohmann::json geometryToJson(const CompactSet& set);

CompactSet loadGeometry(const std::filesystem::path& path);

}  // namespace gammacap

#include "gammacap/geometry_io.hpp"

#include <fstream>

namespace gammacap {

using nlohmann::json;

namespace {

double number(const json& node, const char* key, const std::string& where)
{
    if (!node.contains(key)) {
        throw SchemaError(where, std::string("missing field \"") + key + "\"");
    }
    const json& v = node.at(key);
    if (!v.is_number()) {
        throw SchemaError(where + "/" + key, "expected a number");
    }
    return v.get<double>();
}

Piece parsePiece(const json& node, const std::string& where)
{
    if (!node.is_object() || !node.contains("type") || !node.at("type").is_string()) {
        throw SchemaError(where, "segment needs a string \"type\"");
    }
    const auto type = node.at("type").get<std::string>();
    if (type == "line") {
        if (!node.contains("from") || !node.contains("to")) {
            throw SchemaError(where, "line segment needs \"from\" and \"to\"");
        }
        return LinePiece{parsePoint(node.at("from"), where + "/from"), parsePoint(node.at("to"), where + "/to")};
    }
    if (type == "arc") {
        if (!node.contains("center")) {
            throw SchemaError(where, "arc segment needs \"center\"");
        }
        return ArcPiece{parsePoint(node.at("center"), where + "/center"), number(node, "radius", where),
                        number(node, "start", where), number(node, "sweep", where)};
    }
    throw SchemaError(where + "/type", "unknown segment type \"" + type + "\"");
}

}  // namespace

Complex parsePoint(const json& node, const std::string& where)
{
    if (!node.is_array() || node.size() != 2 || !node[0].is_number() || !node[1].is_number()) {
        throw SchemaError(where, "expected a point [re, im]");
    }
    const Complex z(node[0].get<double>(), node[1].get<double>());
    if (!isFinite(z)) {
        throw SchemaError(where, "point is not finite");
    }
    return z;
}

json pointToJson(Complex z)
{
    return json::array({z.real(), z.imag()});
}

CompactSet geometryFromJson(const json& doc)
{
    if (!doc.is_object() || !doc.contains("components") || !doc.at("components").is_array()) {
        throw SchemaError("/", "expected an object with a \"components\" array");
    }
    const json& list = doc.at("components");
    if (list.empty()) {
        throw SchemaError("/components", "at least one component is required");
    }
    std::vector<BoundaryComponent> comps;
    std::vector<std::optional<Complex>> anchors;
    for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string where = "/components/" + std::to_string(i);
        const json& node = list[i];
        if (!node.is_object() || !node.contains("type") || !node.at("type").is_string()) {
            throw SchemaError(where, "component needs a string \"type\"");
        }
        const auto type = node.at("type").get<std::string>();
        if (type == "circle") {
            if (!node.contains("center")) {
                throw SchemaError(where, "missing field \"center\"");
            }
            const double phase = node.contains("rot") ? number(node, "rot", where) : 0.0;
            comps.push_back(BoundaryComponent::circle(parsePoint(node.at("center"), where + "/center"),
                                                      number(node, "radius", where), phase));
        } else if (type == "ellipse") {
            if (!node.contains("center")) {
                throw SchemaError(where, "missing field \"center\"");
            }
            const double rot = node.contains("rot") ? number(node, "rot", where) : 0.0;
            comps.push_back(BoundaryComponent::ellipse(parsePoint(node.at("center"), where + "/center"),
                                                       number(node, "a", where), number(node, "b", where), rot));
        } else if (type == "polyarcs") {
            if (!node.contains("segments") || !node.at("segments").is_array()) {
                throw SchemaError(where, "polyarcs needs a \"segments\" array");
            }
            std::vector<Piece> pieces;
            const json& segs = node.at("segments");
            for (std::size_t k = 0; k < segs.size(); ++k) {
                pieces.push_back(parsePiece(segs[k], where + "/segments/" + std::to_string(k)));
            }
            std::vector<Corner> corners;
            if (node.contains("corners")) {
                const json& cs = node.at("corners");
                if (!cs.is_array()) {
                    throw SchemaError(where + "/corners", "expected an array");
                }
                for (std::size_t k = 0; k < cs.size(); ++k) {
                    const std::string cw = where + "/corners/" + std::to_string(k);
                    if (!cs[k].is_object() || !cs[k].contains("vertex")) {
                        throw SchemaError(cw, "corner needs \"vertex\" and \"angle\"");
                    }
                    corners.push_back(Corner{parsePoint(cs[k].at("vertex"), cw + "/vertex"), number(cs[k], "angle", cw)});
                }
            }
            comps.push_back(BoundaryComponent::piecewise(std::move(pieces), std::move(corners)));
        } else {
            throw SchemaError(where + "/type", "unknown component type \"" + type + "\"");
        }
        if (node.contains("anchor")) {
            anchors.emplace_back(parsePoint(node.at("anchor"), where + "/anchor"));
        } else {
            anchors.emplace_back(std::nullopt);
        }
    }
    return CompactSet(std::move(comps), std::move(anchors));
}

json geometryToJson(const CompactSet& set)
{
    json list = json::array();
    for (std::size_t i = 0; i < set.size(); ++i) {
        const auto& comp = set.components[i];
        json node;
        if (const auto* c = std::get_if<Circle>(&comp.kind)) {
            node = {{"type", "circle"}, {"center", pointToJson(c->center)}, {"radius", c->radius}};
            if (c->phase != 0.0) {
                node["rot"] = c->phase;
            }
        } else if (const auto* e = std::get_if<Ellipse>(&comp.kind)) {
            node = {{"type", "ellipse"}, {"center", pointToJson(e->center)}, {"a", e->semiMajor}, {"b", e->semiMinor},
                    {"rot", e->rotation}};
        } else if (const auto* pw = std::get_if<PiecewiseArcs>(&comp.kind)) {
            json segs = json::array();
            for (const auto& piece : pw->pieces) {
                if (const auto* line = std::get_if<LinePiece>(&piece)) {
                    segs.push_back({{"type", "line"}, {"from", pointToJson(line->from)}, {"to", pointToJson(line->to)}});
                } else {
                    const auto& arc = std::get<ArcPiece>(piece);
                    segs.push_back({{"type", "arc"}, {"center", pointToJson(arc.center)}, {"radius", arc.radius},
                                    {"start", arc.start}, {"sweep", arc.sweep}});
                }
            }
            json corners = json::array();
            for (const auto& corner : comp.corners) {
                corners.push_back({{"vertex", pointToJson(corner.vertex)}, {"angle", corner.interiorAngle}});
            }
            node = {{"type", "polyarcs"}, {"segments", segs}, {"corners", corners}};
        } else {
            throw InputError("traced curves have no file representation");
        }
        node["anchor"] = pointToJson(set.anchors[i]);
        list.push_back(node);
    }
    return json{{"components", list}};
}

CompactSet loadGeometry(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open geometry file " + path.string());
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw SchemaError(path.string(), std::string("malformed JSON (") + e.what() + ")");
    }
    return geometryFromJson(doc);
}

}  // namespace gammacap

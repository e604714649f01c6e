#pragma once

#include <array>
#include <cmath>
#include <initializer_list>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "lattice/frame.hpp"
#include "lattice/io.hpp"
#include "lattice/patterns.hpp"
#include "lattice/printability.hpp"
#include "lattice/sizing.hpp"
#include "lattice/unit_cell.hpp"

namespace lattice {

/// Every problem found in a config, not just the first.
class ConfigError : public Error {
public:
    explicit ConfigError(std::vector<std::string> messages)
        : Error(ErrorKind::Config, join(messages)), messages_(std::move(messages)) {}

    const std::vector<std::string>& messages() const { return messages_; }

private:
    static std::string join(const std::vector<std::string>& m) {
        std::string out = std::to_string(m.size()) + " problem(s)";
        for (const auto& s : m) out += "\n  " + s;
        return out;
    }
    std::vector<std::string> messages_;
};

enum class PatternKind { UnitCell, Cross, Hexagonal };

struct PatternSpec {
    std::string name;
    PatternKind kind = PatternKind::UnitCell;
    double pitch = 0.0;  // cross pitch or hexagon circumradius, mm
    UnitCellParams cell;
};

/// Fill-region comparison. The region stands in for the hollow part's
/// interior; shell walls themselves are not modeled.
struct CompareBlock {
    Vec3 region = Vec3{93.6, 167.0, 13.0};  // bounding box, mm
    double wall = 0.5;
    double total_force = 100.0;
    std::vector<Axis> directions{Axis::Y, Axis::X, Axis::Z};
    FaceSelector support{Axis::Y, false};
    FaceSelector loaded{Axis::Y, true};
    std::vector<PatternSpec> patterns;
};

struct OutputPaths {
    std::optional<std::string> stl;
    std::optional<std::string> obj;
    std::optional<std::string> json;
    std::optional<std::string> csv;
};

struct WorkbenchConfig {
    std::optional<UnitCellParams> unit_cell;
    std::array<int, 3> tiling{1, 1, 1};
    BeamNetwork network;  // generated or given, selectors resolved against it
    Material material;
    std::vector<NodeConstraint> constraints;
    LoadCase load{"default", {}};
    std::optional<SizingSpec> sizing;
    std::optional<CompareBlock> compare;
    PrintabilityOptions printability;
    OutputPaths output;

    StructuralModel model() const {
        StructuralModel m = StructuralModel::from_network(network, material);
        m.constraints = constraints;
        m.load_cases = {load};
        return m;
    }

    SizingProblem sizing_problem() const { return {network, material, constraints, load}; }
};

/// Builds the networks a comparison block describes. Unit-cell patterns are
/// tiled as many whole cells as fit the region.
inline std::vector<PatternCase> build_patterns(const CompareBlock& c) {
    std::vector<PatternCase> out;
    const Rect footprint{0.0, 0.0, c.region.x(), c.region.y()};
    for (const auto& p : c.patterns) {
        switch (p.kind) {
        case PatternKind::Cross:
            out.push_back({p.name, generate_cross_pattern(footprint, p.pitch, c.wall, c.region.z())});
            break;
        case PatternKind::Hexagonal:
            out.push_back({p.name, generate_hexagonal_pattern(footprint, p.pitch, c.wall, c.region.z())});
            break;
        case PatternKind::UnitCell: {
            UnitCellParams cell = p.cell;
            cell.thickness = c.wall;
            const int nx = static_cast<int>(std::floor(c.region.x() / cell.width() + 1e-9));
            const int ny = static_cast<int>(std::floor(c.region.y() / cell.depth() + 1e-9));
            const int nz = static_cast<int>(std::floor(c.region.z() / cell.height() + 1e-9));
            if (nx < 1 || ny < 1 || nz < 1) throw Error(ErrorKind::EmptyPattern, "cell of pattern '" + p.name + "' does not fit the region");
            out.push_back({p.name, tile(cell, nx, ny, nz)});
            break;
        }
        }
    }
    return out;
}

namespace detail {

using nlohmann::json;

/// Accumulating reader: every accessor records problems instead of throwing.
class ConfigReader {
public:
    std::vector<std::string> errors;

    void fail(const std::string& path, const std::string& message) { errors.push_back(path + ": " + message); }

    void allowed_keys(const json& obj, const std::string& path, std::initializer_list<std::string_view> keys) {
        if (!obj.is_object()) return;
        for (const auto& [k, v] : obj.items()) {
            bool ok = false;
            for (auto a : keys) ok = ok || a == k;
            if (!ok) fail(join(path, k), "unknown key");
        }
    }

    bool object(const json& j, const std::string& path) {
        if (j.is_object()) return true;
        fail(path, "expected an object");
        return false;
    }

    std::optional<double> number(const json& obj, const std::string& path, const char* key, bool required = false) {
        if (!obj.contains(key)) {
            if (required) fail(join(path, key), "required key missing");
            return std::nullopt;
        }
        const auto& v = obj.at(key);
        if (!v.is_number()) {
            fail(join(path, key), "expected a number");
            return std::nullopt;
        }
        const double d = v.get<double>();
        if (!std::isfinite(d)) {
            fail(join(path, key), "must be finite");
            return std::nullopt;
        }
        return d;
    }

    std::optional<double> positive(const json& obj, const std::string& path, const char* key, bool required = false) {
        auto v = number(obj, path, key, required);
        if (v && !(*v > 0.0)) {
            fail(join(path, key), "parameter-domain error: must be > 0 (got " + io::format_double(*v) + ")");
            return std::nullopt;
        }
        return v;
    }

    std::optional<Vec3> vec3(const json& obj, const std::string& path, const char* key, bool required = false) {
        if (!obj.contains(key)) {
            if (required) fail(join(path, key), "required key missing");
            return std::nullopt;
        }
        const auto& v = obj.at(key);
        if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() || !v[2].is_number()) {
            fail(join(path, key), "expected an array of three numbers");
            return std::nullopt;
        }
        return Vec3{v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
    }

    std::optional<bool> boolean(const json& obj, const std::string& path, const char* key) {
        if (!obj.contains(key)) return std::nullopt;
        if (!obj.at(key).is_boolean()) {
            fail(join(path, key), "expected true or false");
            return std::nullopt;
        }
        return obj.at(key).get<bool>();
    }

    std::optional<std::string> string(const json& obj, const std::string& path, const char* key, bool required = false) {
        if (!obj.contains(key)) {
            if (required) fail(join(path, key), "required key missing");
            return std::nullopt;
        }
        if (!obj.at(key).is_string()) {
            fail(join(path, key), "expected a string");
            return std::nullopt;
        }
        return obj.at(key).get<std::string>();
    }

    static std::string join(const std::string& path, std::string_view key) {
        return path.empty() ? std::string(key) : path + "." + std::string(key);
    }
    static std::string index(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }
};

inline std::optional<Axis> parse_axis(const std::string& s) {
    if (s == "x" || s == "X") return Axis::X;
    if (s == "y" || s == "Y") return Axis::Y;
    if (s == "z" || s == "Z") return Axis::Z;
    return std::nullopt;
}

/// "+y" / "-x" style face names.
inline std::optional<FaceSelector> parse_face(const std::string& s) {
    if (s.size() != 2 || (s[0] != '+' && s[0] != '-')) return std::nullopt;
    auto axis = parse_axis(s.substr(1));
    if (!axis) return std::nullopt;
    return FaceSelector{*axis, s[0] == '+'};
}

inline void parse_units(ConfigReader& r, const json& j) {
    static constexpr std::array<std::pair<const char*, const char*>, 4> expected{
        {{"length", "mm"}, {"force", "N"}, {"stress", "MPa"}, {"mass", "kg"}}};
    if (j.is_string()) {
        if (j.get<std::string>() != "mm-N-MPa-kg") r.fail("units", "only mm-N-MPa-kg is supported");
        return;
    }
    if (!r.object(j, "units")) return;
    r.allowed_keys(j, "units", {"length", "force", "stress", "mass"});
    for (const auto& [key, unit] : expected) {
        auto v = r.string(j, "units", key);
        if (v && *v != unit) r.fail(std::string("units.") + key, "unit violation: only " + std::string(unit) + " is supported");
    }
}

inline UnitCellParams parse_unit_cell(ConfigReader& r, const json& j, const std::string& path) {
    UnitCellParams p;
    if (!r.object(j, path)) return p;
    r.allowed_keys(j, path, {"A", "B", "C", "F", "beta_deg", "gamma", "gamma_x", "gamma_y", "gamma_z", "thickness", "section",
                             "brace_ring", "placement"});
    if (auto v = r.positive(j, path, "A")) p.A = *v;
    if (auto v = r.positive(j, path, "B")) p.B = *v;
    if (auto v = r.positive(j, path, "C")) p.C = *v;
    if (auto v = r.positive(j, path, "F")) p.F = *v;
    if (auto v = r.positive(j, path, "thickness")) p.thickness = *v;
    if (auto v = r.number(j, path, "beta_deg")) {
        if (*v > 0.0 && *v < 180.0) {
            p.beta = *v * std::numbers::pi / 180.0;
        } else {
            r.fail(ConfigReader::join(path, "beta_deg"), "parameter-domain error: must lie in (0, 180)");
        }
    }
    if (auto g = r.vec3(j, path, "gamma")) {
        if ((*g).minCoeff() > 0.0) {
            p.gamma_x = g->x();
            p.gamma_y = g->y();
            p.gamma_z = g->z();
        } else {
            r.fail(ConfigReader::join(path, "gamma"), "parameter-domain error: ratios must be > 0");
        }
    }
    if (auto v = r.positive(j, path, "gamma_x")) p.gamma_x = *v;
    if (auto v = r.positive(j, path, "gamma_y")) p.gamma_y = *v;
    if (auto v = r.positive(j, path, "gamma_z")) p.gamma_z = *v;
    if (auto v = r.string(j, path, "section"); v && *v != "square") r.fail(ConfigReader::join(path, "section"), "only 'square' is supported");
    if (auto v = r.boolean(j, path, "brace_ring")) p.brace_ring = *v;
    if (auto v = r.string(j, path, "placement")) {
        if (*v == "on_edge") {
            p.placement = NodePlacement::OnEdge;
        } else if (*v == "literal") {
            p.placement = NodePlacement::Literal;
        } else {
            r.fail(ConfigReader::join(path, "placement"), "expected 'on_edge' or 'literal'");
        }
    }
    return p;
}

inline std::optional<BeamNetwork> parse_network(ConfigReader& r, const json& j) {
    if (!r.object(j, "network")) return std::nullopt;
    r.allowed_keys(j, "network", {"format", "version", "provenance", "thickness", "nodes", "struts"});
    const double default_side = r.positive(j, "network", "thickness").value_or(0.0);
    BeamNetwork net;
    net.provenance = Provenance::Custom;
    const std::size_t before = r.errors.size();
    if (!j.contains("nodes") || !j.at("nodes").is_array()) {
        r.fail("network.nodes", "required array missing");
    } else {
        for (std::size_t i = 0; i < j.at("nodes").size(); ++i) {
            const auto& n = j.at("nodes")[i];
            const std::string path = ConfigReader::index("network.nodes", i);
            if (!r.object(n, path)) continue;
            r.allowed_keys(n, path, {"id", "position"});
            auto pos = r.vec3(n, path, "position", true);
            if (!n.contains("id") || !n.at("id").is_number_integer()) {
                r.fail(ConfigReader::join(path, "id"), "expected an integer id");
                continue;
            }
            if (pos) net.nodes.push_back({n.at("id").get<int>(), *pos});
        }
    }
    if (!j.contains("struts") || !j.at("struts").is_array()) {
        r.fail("network.struts", "required array missing");
    } else {
        for (std::size_t i = 0; i < j.at("struts").size(); ++i) {
            const auto& s = j.at("struts")[i];
            const std::string path = ConfigReader::index("network.struts", i);
            if (!r.object(s, path)) continue;
            r.allowed_keys(s, path, {"a", "b", "side"});
            if (!s.contains("a") || !s.at("a").is_number_integer() || !s.contains("b") || !s.at("b").is_number_integer()) {
                r.fail(path, "expected integer node ids 'a' and 'b'");
                continue;
            }
            double side = r.positive(s, path, "side").value_or(default_side);
            if (!(side > 0.0)) {
                r.fail(ConfigReader::join(path, "side"), "no section side given and network.thickness unset");
                continue;
            }
            net.struts.push_back({s.at("a").get<int>(), s.at("b").get<int>(), side});
        }
    }
    if (r.errors.size() != before) return std::nullopt;
    try {
        validate_network(net);
    } catch (const Error& e) {
        r.fail("network", e.what());
        return std::nullopt;
    }
    return net;
}

inline void parse_material(ConfigReader& r, const json& j, Material& m) {
    if (j.is_string()) {
        if (j.get<std::string>() == "PETG" || j.get<std::string>() == "petg") {
            m = Material::petg();
        } else {
            r.fail("material", "unknown material preset '" + j.get<std::string>() + "'");
        }
        return;
    }
    if (!r.object(j, "material")) return;
    r.allowed_keys(j, "material", {"name", "E", "nu", "density"});
    (void)r.string(j, "material", "name");
    if (auto v = r.positive(j, "material", "E", true)) {
        if (*v > 1e7) {
            r.fail("material.E", "unit violation: " + io::format_double(*v) + " is not a plausible modulus in MPa");
        } else {
            m.elastic_modulus = *v;
        }
    }
    if (auto v = r.number(j, "material", "nu", true)) {
        if (*v > -1.0 && *v < 0.5) {
            m.poisson_ratio = *v;
        } else {
            r.fail("material.nu", "parameter-domain error: must lie in (-1, 0.5)");
        }
    }
    if (auto v = r.positive(j, "material", "density")) {
        if (*v > 1e-4) {
            r.fail("material.density", "unit violation: " + io::format_double(*v) + " is not a plausible density in kg/mm^3");
        } else {
            m.density = *v;
        }
    }
}

/// Resolves a selector to node ids; records an error when nothing matches.
inline std::vector<int> resolve_selector(ConfigReader& r, const json& j, const std::string& path, const BeamNetwork* net) {
    std::vector<int> ids;
    if (!r.object(j, path)) return ids;
    r.allowed_keys(j, path, {"ids", "where"});
    const bool has_ids = j.contains("ids");
    const bool has_where = j.contains("where");
    if (has_ids == has_where) {
        r.fail(path, "give exactly one of 'ids' or 'where'");
        return ids;
    }
    if (has_ids) {
        const auto& arr = j.at("ids");
        if (!arr.is_array()) {
            r.fail(ConfigReader::join(path, "ids"), "expected an array of node ids");
            return ids;
        }
        for (const auto& v : arr) {
            if (!v.is_number_integer()) {
                r.fail(ConfigReader::join(path, "ids"), "expected integer node ids");
                return {};
            }
            const int id = v.get<int>();
            if (net) {
                try {
                    (void)net->index_of(id);
                } catch (const Error&) {
                    r.fail(ConfigReader::join(path, "ids"), "unresolved node " + std::to_string(id));
                    continue;
                }
            }
            ids.push_back(id);
        }
        return ids;
    }

    const auto& w = j.at("where");
    const std::string wpath = ConfigReader::join(path, "where");
    if (!r.object(w, wpath)) return ids;
    r.allowed_keys(w, wpath, {"axis", "equals", "min", "max", "extreme", "tol"});
    auto axis_name = r.string(w, wpath, "axis", true);
    std::optional<Axis> axis = axis_name ? parse_axis(*axis_name) : std::nullopt;
    if (axis_name && !axis) r.fail(ConfigReader::join(wpath, "axis"), "expected x, y or z");
    auto equals = r.number(w, wpath, "equals");
    auto lo = r.number(w, wpath, "min");
    auto hi = r.number(w, wpath, "max");
    auto extreme = r.string(w, wpath, "extreme");
    const double tol = r.positive(w, wpath, "tol").value_or(1e-6);
    if (extreme && *extreme != "min" && *extreme != "max") r.fail(ConfigReader::join(wpath, "extreme"), "expected 'min' or 'max'");
    if (!equals && !lo && !hi && !extreme) r.fail(wpath, "needs one of equals, min, max or extreme");
    if (!axis || !net || net->nodes.empty()) return ids;

    const int k = static_cast<int>(*axis);
    const auto [bb_lo, bb_hi] = bounding_box(*net);
    for (const auto& n : net->nodes) {
        const double x = n.position(k);
        bool ok = true;
        if (equals) ok = ok && std::abs(x - *equals) <= tol;
        if (lo) ok = ok && x >= *lo - tol;
        if (hi) ok = ok && x <= *hi + tol;
        if (extreme) ok = ok && std::abs(x - (*extreme == "min" ? bb_lo(k) : bb_hi(k))) <= tol;
        if (ok) ids.push_back(n.id);
    }
    if (ids.empty()) r.fail(path, "unresolved selector: matches no node");
    return ids;
}

inline std::array<bool, 6> parse_fix(ConfigReader& r, const json& c, const std::string& path) {
    std::array<bool, 6> fixed{true, true, true, true, true, true};
    if (!c.contains("fix")) return fixed;
    const auto& f = c.at("fix");
    if (f.is_string()) {
        if (f.get<std::string>() == "all") return fixed;
        if (f.get<std::string>() == "translations") return {true, true, true, false, false, false};
        r.fail(ConfigReader::join(path, "fix"), "expected 'all', 'translations' or a list of DOF names");
        return fixed;
    }
    if (!f.is_array()) {
        r.fail(ConfigReader::join(path, "fix"), "expected 'all', 'translations' or a list of DOF names");
        return fixed;
    }
    fixed.fill(false);
    for (const auto& d : f) {
        bool matched = false;
        for (int k = 0; k < 6; ++k) {
            if (d.is_string() && d.get<std::string>() == dof_name(k)) {
                fixed[static_cast<std::size_t>(k)] = true;
                matched = true;
            }
        }
        if (!matched) r.fail(ConfigReader::join(path, "fix"), "unknown DOF name " + d.dump());
    }
    return fixed;
}

inline std::optional<SizingSpec> parse_sizing(ConfigReader& r, const json& j) {
    if (!r.object(j, "sizing")) return std::nullopt;
    r.allowed_keys(j, "sizing", {"displacement_limit", "t_lo", "t_hi", "tolerance"});
    SizingSpec s;
    auto d = r.positive(j, "sizing", "displacement_limit", true);
    auto lo = r.positive(j, "sizing", "t_lo", true);
    auto hi = r.positive(j, "sizing", "t_hi", true);
    auto tol = r.positive(j, "sizing", "tolerance");
    if (!d || !lo || !hi) return std::nullopt;
    if (!(*lo < *hi)) {
        r.fail("sizing.t_lo", "parameter-domain error: must be below sizing.t_hi");
        return std::nullopt;
    }
    s.displacement_limit = *d;
    s.t_lo = *lo;
    s.t_hi = *hi;
    if (tol) s.tolerance = *tol;
    return s;
}

inline std::optional<CompareBlock> parse_compare(ConfigReader& r, const json& j) {
    if (!r.object(j, "compare")) return std::nullopt;
    r.allowed_keys(j, "compare", {"region", "wall", "force", "directions", "support_face", "load_face", "patterns"});
    CompareBlock c;
    const std::size_t before = r.errors.size();
    if (auto v = r.vec3(j, "compare", "region")) {
        if (v->minCoeff() > 0.0) {
            c.region = *v;
        } else {
            r.fail("compare.region", "parameter-domain error: dimensions must be > 0");
        }
    }
    if (auto v = r.positive(j, "compare", "wall")) c.wall = *v;
    if (auto v = r.positive(j, "compare", "force")) c.total_force = *v;
    if (j.contains("directions")) {
        c.directions.clear();
        const auto& d = j.at("directions");
        if (!d.is_array() || d.empty()) r.fail("compare.directions", "expected a non-empty array of X, Y, Z");
        for (const auto& a : d.is_array() ? d : json::array()) {
            auto axis = a.is_string() ? parse_axis(a.get<std::string>()) : std::nullopt;
            if (axis) {
                c.directions.push_back(*axis);
            } else {
                r.fail("compare.directions", "unknown direction " + a.dump());
            }
        }
    }
    for (const auto& [key, target] : {std::pair{"support_face", &c.support}, std::pair{"load_face", &c.loaded}}) {
        if (auto v = r.string(j, "compare", key)) {
            if (auto f = parse_face(*v)) {
                *target = *f;
            } else {
                r.fail(std::string("compare.") + key, "expected a face like '-y' or '+x'");
            }
        }
    }
    if (!j.contains("patterns") || !j.at("patterns").is_array() || j.at("patterns").empty()) {
        r.fail("compare.patterns", "required non-empty array missing");
    } else {
        for (std::size_t i = 0; i < j.at("patterns").size(); ++i) {
            const auto& p = j.at("patterns")[i];
            const std::string path = ConfigReader::index("compare.patterns", i);
            if (!r.object(p, path)) continue;
            r.allowed_keys(p, path, {"name", "kind", "pitch", "cell_size", "cell"});
            PatternSpec spec;
            spec.name = r.string(p, path, "name").value_or("pattern" + std::to_string(i + 1));
            auto kind = r.string(p, path, "kind", true);
            if (!kind) continue;
            if (*kind == "unit_cell") {
                spec.kind = PatternKind::UnitCell;
                if (p.contains("cell")) spec.cell = parse_unit_cell(r, p.at("cell"), ConfigReader::join(path, "cell"));
            } else if (*kind == "cross") {
                spec.kind = PatternKind::Cross;
                if (auto v = r.positive(p, path, "pitch", true)) spec.pitch = *v;
            } else if (*kind == "hexagonal") {
                spec.kind = PatternKind::Hexagonal;
                if (auto v = r.positive(p, path, "cell_size", true)) spec.pitch = *v;
            } else {
                r.fail(ConfigReader::join(path, "kind"), "expected unit_cell, cross or hexagonal");
                continue;
            }
            c.patterns.push_back(spec);
        }
    }
    if (r.errors.size() != before) return std::nullopt;
    return c;
}

inline void parse_printability(ConfigReader& r, const json& j, PrintabilityOptions& opt) {
    if (!r.object(j, "printability")) return;
    r.allowed_keys(j, "printability", {"build_direction", "overhang_limit_deg", "bridge_max"});
    if (auto v = r.vec3(j, "printability", "build_direction")) {
        if (v->norm() > 0.0) {
            opt.build_direction = *v;
        } else {
            r.fail("printability.build_direction", "must be non-zero");
        }
    }
    if (auto v = r.number(j, "printability", "overhang_limit_deg")) {
        if (*v > 0.0 && *v <= 90.0) {
            opt.overhang_limit_deg = *v;
        } else {
            r.fail("printability.overhang_limit_deg", "parameter-domain error: must lie in (0, 90]");
        }
    }
    if (auto v = r.number(j, "printability", "bridge_max")) {
        if (*v >= 0.0) {
            opt.bridge_max = *v;
        } else {
            r.fail("printability.bridge_max", "parameter-domain error: must be >= 0");
        }
    }
}

inline void parse_output(ConfigReader& r, const json& j, OutputPaths& out) {
    if (!r.object(j, "output")) return;
    r.allowed_keys(j, "output", {"stl", "obj", "json", "csv"});
    out.stl = r.string(j, "output", "stl");
    out.obj = r.string(j, "output", "obj");
    out.json = r.string(j, "output", "json");
    out.csv = r.string(j, "output", "csv");
}

}  // namespace detail

/// Parses and validates a JSON workbench config. The geometry is generated
/// so node selectors can be resolved; any problem anywhere lands in one
/// ConfigError listing all of them.
inline WorkbenchConfig load_config(const std::string& text) {
    using detail::ConfigReader;
    using nlohmann::json;
    ConfigReader r;

    json root;
    const bool blank = text.find_first_not_of(" \t\r\n") == std::string::npos;
    if (blank) {
        root = json::object();
    } else {
        try {
            root = json::parse(text);
        } catch (const json::parse_error& e) {
            throw ConfigError({std::string("config is not valid JSON: ") + e.what()});
        }
    }
    if (!root.is_object()) throw ConfigError({"config root must be an object"});

    r.allowed_keys(root, "", {"units", "unit_cell", "tiling", "network", "material", "constraints", "loads", "sizing", "compare",
                              "printability", "output"});

    WorkbenchConfig cfg;
    if (root.contains("units")) detail::parse_units(r, root.at("units"));

    const bool has_cell = root.contains("unit_cell");
    const bool has_net = root.contains("network");
    if (!has_cell && !has_net) r.fail("unit_cell", "required key missing (or give 'network')");
    if (has_cell && has_net) r.fail("network", "give either 'unit_cell' or 'network', not both");
    if (!root.contains("material")) r.fail("material", "required key missing");

    std::optional<BeamNetwork> network;
    const std::size_t before_geometry = r.errors.size();
    if (has_cell) cfg.unit_cell = detail::parse_unit_cell(r, root.at("unit_cell"), "unit_cell");
    if (root.contains("tiling")) {
        const auto& t = root.at("tiling");
        if (!t.is_array() || t.size() != 3 || !t[0].is_number_integer() || !t[1].is_number_integer() || !t[2].is_number_integer() ||
            t[0].get<int>() < 1 || t[1].get<int>() < 1 || t[2].get<int>() < 1) {
            r.fail("tiling", "expected three positive integers");
        } else {
            cfg.tiling = {t[0].get<int>(), t[1].get<int>(), t[2].get<int>()};
        }
        if (!has_cell && has_net) r.fail("tiling", "tiling applies to unit_cell geometry only");
    }
    if (has_net && !has_cell) network = detail::parse_network(r, root.at("network"));
    if (has_cell && r.errors.size() == before_geometry) {
        try {
            network = tile(*cfg.unit_cell, cfg.tiling[0], cfg.tiling[1], cfg.tiling[2]);
        } catch (const Error& e) {
            r.fail("unit_cell", e.what());
        }
    }
    if (network) cfg.network = *network;
    const BeamNetwork* net = network ? &cfg.network : nullptr;

    if (root.contains("material")) detail::parse_material(r, root.at("material"), cfg.material);

    if (root.contains("constraints")) {
        const auto& cs = root.at("constraints");
        if (!cs.is_array()) r.fail("constraints", "expected an array");
        for (std::size_t i = 0; cs.is_array() && i < cs.size(); ++i) {
            const std::string path = ConfigReader::index("constraints", i);
            if (!r.object(cs[i], path)) continue;
            r.allowed_keys(cs[i], path, {"select", "fix"});
            const auto fixed = detail::parse_fix(r, cs[i], path);
            if (!cs[i].contains("select")) {
                r.fail(ConfigReader::join(path, "select"), "required key missing");
                continue;
            }
            for (int id : detail::resolve_selector(r, cs[i].at("select"), ConfigReader::join(path, "select"), net)) {
                cfg.constraints.push_back({id, fixed});
            }
        }
    }

    if (root.contains("loads")) {
        const auto& ls = root.at("loads");
        if (!ls.is_array()) r.fail("loads", "expected an array");
        for (std::size_t i = 0; ls.is_array() && i < ls.size(); ++i) {
            const std::string path = ConfigReader::index("loads", i);
            if (!r.object(ls[i], path)) continue;
            r.allowed_keys(ls[i], path, {"select", "force", "moment", "distribute"});
            const Vec3 force = r.vec3(ls[i], path, "force").value_or(Vec3::Zero());
            const Vec3 moment = r.vec3(ls[i], path, "moment").value_or(Vec3::Zero());
            const bool distribute = r.boolean(ls[i], path, "distribute").value_or(false);
            if (!ls[i].contains("force") && !ls[i].contains("moment")) r.fail(path, "needs 'force' or 'moment'");
            if (!ls[i].contains("select")) {
                r.fail(ConfigReader::join(path, "select"), "required key missing");
                continue;
            }
            const auto ids = detail::resolve_selector(r, ls[i].at("select"), ConfigReader::join(path, "select"), net);
            const double share = distribute && !ids.empty() ? 1.0 / static_cast<double>(ids.size()) : 1.0;
            for (int id : ids) {
                NodalLoad l;
                l.node = id;
                l.values.head<3>() = share * force;
                l.values.tail<3>() = share * moment;
                cfg.load.loads.push_back(l);
            }
        }
    }

    if (root.contains("sizing")) cfg.sizing = detail::parse_sizing(r, root.at("sizing"));
    if (root.contains("compare")) cfg.compare = detail::parse_compare(r, root.at("compare"));
    if (root.contains("printability")) detail::parse_printability(r, root.at("printability"), cfg.printability);
    if (root.contains("output")) detail::parse_output(r, root.at("output"), cfg.output);

    if (!r.errors.empty()) throw ConfigError(std::move(r.errors));
    return cfg;
}

}  // namespace lattice

#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lattice/frame.hpp"
#include "lattice/sizing.hpp"

namespace lattice::io {

using Bytes = std::vector<std::uint8_t>;

/// Writes bytes to `path`, returning the byte count.
inline std::size_t write_file(const std::string& path, const std::string& data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot open '" + path + "' for writing");
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw Error(ErrorKind::Io, "failed writing '" + path + "'");
    return data.size();
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Shortest round-trip text for a double.
inline std::string format_double(double v) {
    char buf[32];
    for (int precision = 15; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof buf, "%.*g", precision, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

// ---------------------------------------------------------------------------
// Binary STL
// ---------------------------------------------------------------------------

struct StlTriangle {
    std::array<float, 3> normal;
    std::array<std::array<float, 3>, 3> vertices;
};

namespace detail {

inline void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
}

inline void put_f32(std::string& out, float v) { put_u32(out, std::bit_cast<std::uint32_t>(v)); }

inline std::uint32_t get_u32(const std::string& in, std::size_t at) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[at + static_cast<std::size_t>(i)])) << (8 * i);
    return v;
}

inline float get_f32(const std::string& in, std::size_t at) { return std::bit_cast<float>(get_u32(in, at)); }

}  // namespace detail

/// Closed square prism around each strut: 8 corners from the strut's local
/// y/z axes, 12 triangles wound counter-clockwise seen from outside.
inline std::vector<StlTriangle> strut_prisms(const BeamNetwork& net) {
    for (const auto& s : net.struts) {
        if (!(net.length(s) > kMergeTolerance)) {
            throw Error(ErrorKind::Geometry, "strut " + std::to_string(s.node_a) + "-" + std::to_string(s.node_b) + " has zero length");
        }
        if (!(s.side > 0.0)) throw Error(ErrorKind::Geometry, "strut section side must be positive");
    }
    std::vector<StlTriangle> tris;
    tris.reserve(12 * net.struts.size());
    for (const auto& s : net.struts) {
        const Vec3& a = net.position(s.node_a);
        const Vec3& b = net.position(s.node_b);
        const ElementRotation r = element_rotation(a, b);
        const Vec3 hy = 0.5 * s.side * r.axis_y();
        const Vec3 hz = 0.5 * s.side * r.axis_z();
        // ring order is counter-clockwise about local x
        const std::array<Vec3, 4> ring{-hy - hz, hy - hz, hy + hz, -hy + hz};
        std::array<Vec3, 8> c;
        for (int i = 0; i < 4; ++i) {
            c[static_cast<std::size_t>(i)] = a + ring[static_cast<std::size_t>(i)];
            c[static_cast<std::size_t>(i + 4)] = b + ring[static_cast<std::size_t>(i)];
        }
        auto emit = [&tris](const Vec3& p, const Vec3& q, const Vec3& w) {
            const Vec3 n = (q - p).cross(w - p).normalized();
            StlTriangle t;
            t.normal = {static_cast<float>(n.x()), static_cast<float>(n.y()), static_cast<float>(n.z())};
            const std::array<const Vec3*, 3> v{&p, &q, &w};
            for (std::size_t k = 0; k < 3; ++k)
                t.vertices[k] = {static_cast<float>(v[k]->x()), static_cast<float>(v[k]->y()), static_cast<float>(v[k]->z())};
            tris.push_back(t);
        };
        for (std::size_t i = 0; i < 4; ++i) {
            const std::size_t j = (i + 1) % 4;
            emit(c[i], c[j], c[j + 4]);
            emit(c[i], c[j + 4], c[i + 4]);
        }
        emit(c[0], c[2], c[1]);
        emit(c[0], c[3], c[2]);
        emit(c[4], c[5], c[6]);
        emit(c[4], c[6], c[7]);
    }
    return tris;
}

inline std::string stl_bytes(const std::vector<StlTriangle>& tris) {
    std::string out;
    out.reserve(84 + 50 * tris.size());
    std::string header = "binary STL, lattice workbench strut prisms";
    header.resize(80, ' ');
    out += header;
    detail::put_u32(out, static_cast<std::uint32_t>(tris.size()));
    for (const auto& t : tris) {
        for (float v : t.normal) detail::put_f32(out, v);
        for (const auto& vert : t.vertices)
            for (float v : vert) detail::put_f32(out, v);
        out.push_back('\0');
        out.push_back('\0');
    }
    return out;
}

inline std::size_t export_stl_solid(const BeamNetwork& net, const std::string& path) {
    return write_file(path, stl_bytes(strut_prisms(net)));
}

inline std::vector<StlTriangle> parse_stl_binary(const std::string& data) {
    if (data.size() < 84) throw Error(ErrorKind::Io, "STL stream shorter than its 84-byte preamble");
    const std::uint32_t count = detail::get_u32(data, 80);
    if (data.size() != 84 + 50 * static_cast<std::size_t>(count)) {
        throw Error(ErrorKind::Io, "STL size does not match its triangle count " + std::to_string(count));
    }
    std::vector<StlTriangle> tris(count);
    for (std::size_t t = 0; t < count; ++t) {
        const std::size_t base = 84 + 50 * t;
        for (std::size_t k = 0; k < 3; ++k) tris[t].normal[k] = detail::get_f32(data, base + 4 * k);
        for (std::size_t v = 0; v < 3; ++v)
            for (std::size_t k = 0; k < 3; ++k) tris[t].vertices[v][k] = detail::get_f32(data, base + 12 + 12 * v + 4 * k);
    }
    return tris;
}

inline std::vector<StlTriangle> read_stl_binary(const std::string& path) { return parse_stl_binary(read_file(path)); }

// ---------------------------------------------------------------------------
// OBJ wireframe
// ---------------------------------------------------------------------------

/// Vertices and 1-based line records. Node ids and strut sides ride along in
/// comment lines ("#id", "#side") that other OBJ readers ignore.
inline std::string obj_text(const BeamNetwork& net) {
    std::string out = "# lattice wireframe\n# provenance " + std::string(to_string(net.provenance)) + "\n";
    for (const auto& n : net.nodes) {
        out += "#id " + std::to_string(n.id) + "\n";
        out += "v " + format_double(n.position.x()) + " " + format_double(n.position.y()) + " " + format_double(n.position.z()) + "\n";
    }
    for (const auto& s : net.struts) {
        out += "#side " + format_double(s.side) + "\n";
        out += "l " + std::to_string(net.index_of(s.node_a) + 1) + " " + std::to_string(net.index_of(s.node_b) + 1) + "\n";
    }
    return out;
}

inline std::size_t export_obj_wireframe(const BeamNetwork& net, const std::string& path) { return write_file(path, obj_text(net)); }

inline BeamNetwork parse_obj_wireframe(const std::string& text) {
    BeamNetwork net;
    std::istringstream in(text);
    std::string line;
    int pending_id = 0;
    bool has_id = false;
    double pending_side = 1.0;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) continue;
        if (tag == "#id") {
            int id;
            if (ls >> id) {
                pending_id = id;
                has_id = true;
            }
        } else if (tag == "#side") {
            double side;
            if (ls >> side) pending_side = side;
        } else if (tag == "#" ) {
            std::string key, value;
            if (ls >> key >> value && key == "provenance") net.provenance = provenance_from_string(value);
        } else if (tag == "v") {
            Vec3 p;
            if (!(ls >> p.x() >> p.y() >> p.z())) throw Error(ErrorKind::Io, "bad vertex on OBJ line " + std::to_string(line_no));
            const int id = has_id ? pending_id : static_cast<int>(net.nodes.size()) + 1;
            net.nodes.push_back({id, p});
            has_id = false;
        } else if (tag == "l") {
            std::size_t a = 0, b = 0;
            if (!(ls >> a >> b) || a < 1 || b < 1 || a > net.nodes.size() || b > net.nodes.size()) {
                throw Error(ErrorKind::Io, "line record out of range on OBJ line " + std::to_string(line_no));
            }
            net.struts.push_back({net.nodes[a - 1].id, net.nodes[b - 1].id, pending_side});
            pending_side = 1.0;
        }
    }
    return net;
}

inline BeamNetwork read_obj_wireframe(const std::string& path) { return parse_obj_wireframe(read_file(path)); }

// ---------------------------------------------------------------------------
// JSON network dump
// ---------------------------------------------------------------------------

inline nlohmann::json network_to_json(const BeamNetwork& net) {
    nlohmann::json j;
    j["format"] = "lattice-network";
    j["version"] = 1;
    j["provenance"] = to_string(net.provenance);
    j["nodes"] = nlohmann::json::array();
    for (const auto& n : net.nodes) {
        j["nodes"].push_back({{"id", n.id}, {"position", {n.position.x(), n.position.y(), n.position.z()}}});
    }
    j["struts"] = nlohmann::json::array();
    for (const auto& s : net.struts) j["struts"].push_back({{"a", s.node_a}, {"b", s.node_b}, {"side", s.side}});
    return j;
}

inline std::string network_json_text(const BeamNetwork& net) { return network_to_json(net).dump(2) + "\n"; }

inline std::size_t export_network_json(const BeamNetwork& net, const std::string& path) {
    return write_file(path, network_json_text(net));
}

inline BeamNetwork network_from_json(const nlohmann::json& j) {
    try {
        BeamNetwork net;
        net.provenance = provenance_from_string(j.at("provenance").get<std::string>());
        for (const auto& n : j.at("nodes")) {
            const auto& p = n.at("position");
            net.nodes.push_back({n.at("id").get<int>(), Vec3{p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>()}});
        }
        for (const auto& s : j.at("struts")) net.struts.push_back({s.at("a").get<int>(), s.at("b").get<int>(), s.at("side").get<double>()});
        return net;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Io, std::string("malformed network JSON: ") + e.what());
    }
}

inline BeamNetwork read_network_json(const std::string& path) {
    try {
        return network_from_json(nlohmann::json::parse(read_file(path)));
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::Io, std::string("cannot parse '") + path + "': " + e.what());
    }
}

// ---------------------------------------------------------------------------
// CSV comparison report
// ---------------------------------------------------------------------------

inline constexpr const char* kCsvHeader =
    "direction,geometry,max_displacement_mm,max_stress_MPa,mass_kg,efficiency_mm_per_kg,improvement_pct";

/// Full-precision rows; the reference row leaves improvement empty. A
/// direction that failed to solve contributes no rows.
inline std::string comparison_csv(const std::vector<ComparisonReport>& reports) {
    std::string out = std::string(kCsvHeader) + "\n";
    for (const auto& rep : reports) {
        for (const auto& r : rep.records) {
            out += std::string(to_string(rep.direction)) + "," + r.pattern + "," + format_double(r.max_displacement) + "," +
                   format_double(r.max_stress) + "," + format_double(r.mass) + "," + format_double(r.efficiency) + "," +
                   (r.improvement ? format_double(*r.improvement) : std::string()) + "\n";
        }
    }
    return out;
}

}  // namespace lattice::io

#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "lattice/network.hpp"

namespace lattice {

enum class SectionKind { Square };

/// Where interior nodes 9-12 sit.
///  - OnEdge: on the corner-to-apex slant edge, arc distance F from the corner.
///  - Literal: inward offsets F*sin(beta/2) in x and y, F*cos(beta/2) down.
enum class NodePlacement { OnEdge, Literal };

/// Pyramidal cell parameters. Lengths in mm, beta in radians.
///
/// The cell spans x in [-B/2, B/2], y in [-C/2, C/2], z in [0, A], apex at
/// the origin. The gamma ratios stretch B, C and A respectively; all ones
/// gives the cubic reference cell.
struct UnitCellParams {
    double A = 100.0;
    double B = 100.0;
    double C = 100.0;
    double F = 10.0;
    /// Required in literal mode; informational in on-edge mode, where the
    /// slant geometry fixes the angle.
    std::optional<double> beta;
    double gamma_x = 1.0;
    double gamma_y = 1.0;
    double gamma_z = 1.0;
    double thickness = 4.0;
    SectionKind section_kind = SectionKind::Square;
    bool brace_ring = true;
    NodePlacement placement = NodePlacement::OnEdge;

    double height() const { return A * gamma_z; }
    double width() const { return B * gamma_x; }
    double depth() const { return C * gamma_y; }

    /// Corner-to-apex edge length.
    double slant_length() const { return std::sqrt(height() * height() + 0.25 * width() * width() + 0.25 * depth() * depth()); }

    /// Full angle between opposite slant edges at the apex.
    double derived_beta() const { return 2.0 * std::atan(std::hypot(0.5 * width(), 0.5 * depth()) / height()); }
};

/// Interior node id attached to each corner id (1->9, 3->10, 7->11, 5->12).
inline constexpr std::array<std::pair<int, int>, 4> kCornerToInterior{{{3, 9}, {1, 10}, {7, 11}, {5, 12}}};
inline constexpr int kApexId = 13;

inline void validate(const UnitCellParams& p) {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorKind::ParameterDomain, std::string(name) + " must be a positive finite length");
    };
    positive(p.A, "A");
    positive(p.B, "B");
    positive(p.C, "C");
    positive(p.thickness, "thickness");
    positive(p.gamma_x, "gamma_x");
    positive(p.gamma_y, "gamma_y");
    positive(p.gamma_z, "gamma_z");
    if (!(p.F > 0.0) || !std::isfinite(p.F)) throw Error(ErrorKind::ParameterDomain, "F must be positive");
    if (p.beta && !(*p.beta > 0.0 && *p.beta < std::numbers::pi)) {
        throw Error(ErrorKind::ParameterDomain, "beta must lie in (0, pi)");
    }
    if (p.placement == NodePlacement::Literal && !p.beta) {
        throw Error(ErrorKind::ParameterDomain, "beta is required in literal placement mode");
    }
    const double smallest = std::min({p.height(), p.width(), p.depth()});
    if (!(p.thickness < 0.5 * smallest)) {
        throw Error(ErrorKind::ParameterDomain, "thickness must be below half the smallest cell dimension");
    }
    if (!(p.F < p.slant_length())) {
        throw Error(ErrorKind::Geometry, "F exceeds the slant edge length " + std::to_string(p.slant_length()));
    }
    if (p.placement == NodePlacement::Literal) {
        const double s = p.F * std::sin(*p.beta / 2.0);
        const double c = p.F * std::cos(*p.beta / 2.0);
        if (!(s < 0.5 * p.width() && s < 0.5 * p.depth() && c < p.height())) {
            throw Error(ErrorKind::Geometry, "literal interior-node offsets leave the cell");
        }
    }
}

/// Positions of nodes 1..13 (index 0 holds node 1).
///
/// The top ring runs 1..8 with corners on odd ids, starting at (+B/2, -C/2)
/// and heading toward -x, so that every node matches its tabulated
/// coordinate pattern: 1,3 = (+-B/2, -C/2); 5,7 = (-+B/2, C/2);
/// 2,6 = (0, -+C/2); 4,8 = (-+B/2, 0).
inline std::array<Vec3, 13> unit_cell_positions(const UnitCellParams& p) {
    validate(p);
    const double a = p.height();
    const double hb = 0.5 * p.width();
    const double hc = 0.5 * p.depth();

    std::array<Vec3, 13> x;
    x[0] = {hb, -hc, a};
    x[1] = {0.0, -hc, a};
    x[2] = {-hb, -hc, a};
    x[3] = {-hb, 0.0, a};
    x[4] = {-hb, hc, a};
    x[5] = {0.0, hc, a};
    x[6] = {hb, hc, a};
    x[7] = {hb, 0.0, a};
    x[12] = Vec3::Zero();

    for (const auto& [corner, interior] : kCornerToInterior) {
        const Vec3& c = x[static_cast<std::size_t>(corner - 1)];
        Vec3 node;
        if (p.placement == NodePlacement::OnEdge) {
            node = c + p.F * (x[12] - c).normalized();
        } else {
            const double off = p.F * std::sin(*p.beta / 2.0);
            // offsets point toward the cell axis
            node = {c.x() - std::copysign(off, c.x()), c.y() - std::copysign(off, c.y()), a - p.F * std::cos(*p.beta / 2.0)};
        }
        x[static_cast<std::size_t>(interior - 1)] = node;
    }
    return x;
}

/// Default strut list as id pairs: top ring, split slant edges, optional
/// brace ring through the interior nodes.
inline std::vector<std::pair<int, int>> unit_cell_connectivity(bool brace_ring) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 1; i <= 8; ++i) edges.emplace_back(i, i % 8 + 1);
    for (const auto& [corner, interior] : kCornerToInterior) {
        edges.emplace_back(corner, interior);
        edges.emplace_back(interior, kApexId);
    }
    if (brace_ring) {
        edges.emplace_back(9, 10);
        edges.emplace_back(10, 11);
        edges.emplace_back(11, 12);
        edges.emplace_back(12, 9);
    }
    return edges;
}

inline BeamNetwork build_unit_cell(const UnitCellParams& p) {
    const auto x = unit_cell_positions(p);
    BeamNetwork net;
    net.provenance = Provenance::UnitCell;
    for (int id = 1; id <= 13; ++id) net.nodes.push_back({id, x[static_cast<std::size_t>(id - 1)]});
    for (const auto& [a, b] : unit_cell_connectivity(p.brace_ring)) net.struts.push_back({a, b, p.thickness});
    return net;
}

/// Grid of nx*ny*nz cells with pitches (width, depth, height); coincident
/// nodes welded and shared struts kept once.
///
/// Odd z-layers are mirrored about their mid-height so that layers meet
/// ring-to-ring and apex-to-apex; plain translation would leave each apex
/// floating in the face of the cell below.
inline BeamNetwork tile(const UnitCellParams& p, int nx, int ny, int nz) {
    if (nx < 1 || ny < 1 || nz < 1) throw Error(ErrorKind::ParameterDomain, "tile counts must be at least 1");
    const BeamNetwork cell = build_unit_cell(p);
    const double a = p.height();
    NetworkBuilder builder(nx * ny * nz == 1 ? Provenance::UnitCell : Provenance::Tiled);

    for (int k = 0; k < nz; ++k) {
        for (int j = 0; j < ny; ++j) {
            for (int i = 0; i < nx; ++i) {
                const Vec3 offset{i * p.width(), j * p.depth(), k * a};
                std::vector<int> ids(cell.nodes.size());
                for (std::size_t n = 0; n < cell.nodes.size(); ++n) {
                    Vec3 q = cell.nodes[n].position;
                    if (k % 2 == 1) q.z() = a - q.z();
                    ids[n] = builder.add_node(q + offset);
                }
                for (const auto& s : cell.struts) {
                    builder.add_strut(ids[cell.index_of(s.node_a)], ids[cell.index_of(s.node_b)], s.side);
                }
            }
        }
    }
    return builder.take();
}

}  // namespace lattice

#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "lattice/network.hpp"

namespace lattice {

enum class StrutSupport { SelfSupporting, Bridge, Unsupported };

inline const char* to_string(StrutSupport s) {
    switch (s) {
    case StrutSupport::SelfSupporting: return "self-supporting";
    case StrutSupport::Bridge: return "bridge";
    case StrutSupport::Unsupported: return "unsupported";
    }
    return "unsupported";
}

struct PrintabilityOptions {
    Vec3 build_direction = Vec3::UnitZ();
    double overhang_limit_deg = 45.0;  // minimum angle to the build plane
    double bridge_max = 20.0;          // mm
};

struct PrintabilityReport {
    std::vector<StrutSupport> classification;  // one per strut
    std::vector<double> angle_deg;             // angle of each strut to the build plane
    bool pass = true;
    Vec3 build_direction = Vec3::UnitZ();

    int count(StrutSupport kind) const {
        int n = 0;
        for (auto c : classification) n += (c == kind);
        return n;
    }
};

/// Angle in degrees between a strut and the plane normal to `dir` (unit).
inline double angle_to_build_plane(const Vec3& a, const Vec3& b, const Vec3& dir) {
    const Vec3 d = b - a;
    const double s = std::clamp(std::abs(d.dot(dir)) / d.norm(), 0.0, 1.0);
    return std::asin(s) * 180.0 / std::numbers::pi;
}

/// Classifies every strut for support-free printing along `build_direction`.
///
/// Struts at or above the overhang limit are self-supporting. A flatter strut
/// is a bridge when it belongs to a chain of flat struts whose two ends rest on
/// supported nodes and whose total length is at most `bridge_max`; the chain
/// passes through unsupported nodes that join exactly two flat struts, so a
/// straight edge through an unsupported midpoint counts as one span.
/// Supported nodes are those on the bed (lowest height), tops of
/// self-supporting struts rising from supported nodes, and nodes inside
/// accepted bridges, iterated to a fixpoint.
inline PrintabilityReport printability_check(const BeamNetwork& net, const PrintabilityOptions& opt = {}) {
    const double dir_norm = opt.build_direction.norm();
    if (!(dir_norm > 0.0) || !std::isfinite(dir_norm)) throw Error(ErrorKind::ParameterDomain, "build direction must be non-zero");
    if (!(opt.overhang_limit_deg > 0.0 && opt.overhang_limit_deg <= 90.0)) {
        throw Error(ErrorKind::ParameterDomain, "overhang limit must lie in (0, 90] degrees");
    }
    if (!(opt.bridge_max >= 0.0)) throw Error(ErrorKind::ParameterDomain, "bridge_max must be non-negative");

    const Vec3 dir = opt.build_direction / dir_norm;
    PrintabilityReport report;
    report.build_direction = dir;
    const std::size_t n_nodes = net.nodes.size();
    const std::size_t n_struts = net.struts.size();
    report.classification.assign(n_struts, StrutSupport::Unsupported);
    report.angle_deg.resize(n_struts);
    if (n_struts == 0) return report;

    std::vector<double> height(n_nodes);
    double bed = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n_nodes; ++i) {
        height[i] = net.nodes[i].position.dot(dir);
        bed = std::min(bed, height[i]);
    }

    struct Ends {
        std::size_t a, b;
    };
    std::vector<Ends> ends(n_struts);
    std::vector<bool> steep(n_struts);
    std::vector<std::vector<std::size_t>> flat_incident(n_nodes);
    for (std::size_t e = 0; e < n_struts; ++e) {
        const auto& s = net.struts[e];
        ends[e] = {net.index_of(s.node_a), net.index_of(s.node_b)};
        report.angle_deg[e] = angle_to_build_plane(net.nodes[ends[e].a].position, net.nodes[ends[e].b].position, dir);
        steep[e] = report.angle_deg[e] >= opt.overhang_limit_deg - 1e-9;
        if (steep[e]) {
            report.classification[e] = StrutSupport::SelfSupporting;
        } else {
            flat_incident[ends[e].a].push_back(e);
            flat_incident[ends[e].b].push_back(e);
        }
    }

    std::vector<bool> supported(n_nodes, false);
    for (std::size_t i = 0; i < n_nodes; ++i) supported[i] = height[i] - bed <= kMergeTolerance;

    auto other_end = [&ends](std::size_t e, std::size_t node) { return ends[e].a == node ? ends[e].b : ends[e].a; };
    auto pass_through = [&](std::size_t node) { return !supported[node] && flat_incident[node].size() == 2; };

    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t e = 0; e < n_struts; ++e) {
            if (!steep[e]) continue;
            const auto [lo, hi] = height[ends[e].a] <= height[ends[e].b] ? std::pair{ends[e].a, ends[e].b}
                                                                          : std::pair{ends[e].b, ends[e].a};
            if (supported[lo] && !supported[hi]) {
                supported[hi] = true;
                changed = true;
            }
        }
        for (std::size_t e = 0; e < n_struts; ++e) {
            if (steep[e] || report.classification[e] == StrutSupport::Bridge) continue;
            // walk the chain both ways from this strut
            std::vector<std::size_t> chain{e};
            std::vector<std::size_t> inner;
            std::array<std::size_t, 2> tips{};
            bool closed_loop = false;
            for (int side = 0; side < 2 && !closed_loop; ++side) {
                std::size_t edge = e;
                std::size_t node = side == 0 ? ends[e].a : ends[e].b;
                while (pass_through(node)) {
                    const auto& inc = flat_incident[node];
                    const std::size_t next = inc[0] == edge ? inc[1] : inc[0];
                    if (next == e) {
                        closed_loop = true;
                        break;
                    }
                    inner.push_back(node);
                    chain.push_back(next);
                    node = other_end(next, node);
                    edge = next;
                }
                tips[static_cast<std::size_t>(side)] = node;
            }
            if (closed_loop || !supported[tips[0]] || !supported[tips[1]]) continue;
            double span = 0.0;
            for (auto c : chain) span += (net.nodes[ends[c].a].position - net.nodes[ends[c].b].position).norm();
            if (span > opt.bridge_max + 1e-9) continue;
            for (auto c : chain) report.classification[c] = StrutSupport::Bridge;
            for (auto n : inner) supported[n] = true;
            changed = true;
        }
    }

    report.pass = report.count(StrutSupport::Unsupported) == 0;
    return report;
}

}  // namespace lattice

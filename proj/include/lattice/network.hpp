#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "lattice/error.hpp"

namespace lattice {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Nodes closer than this (mm) are treated as one node.
inline constexpr double kMergeTolerance = 1e-6;

struct LatticeNode {
    int id = 0;
    Vec3 position = Vec3::Zero();
};

struct Strut {
    int node_a = 0;
    int node_b = 0;
    double side = 0.0;  // square section side, mm
};

enum class Provenance { UnitCell, Tiled, Cross, Hexagonal, Custom };

inline const char* to_string(Provenance p) {
    switch (p) {
    case Provenance::UnitCell: return "unit-cell";
    case Provenance::Tiled: return "tiled";
    case Provenance::Cross: return "cross";
    case Provenance::Hexagonal: return "hexagonal";
    case Provenance::Custom: return "custom";
    }
    return "custom";
}

inline Provenance provenance_from_string(const std::string& s) {
    if (s == "unit-cell") return Provenance::UnitCell;
    if (s == "tiled") return Provenance::Tiled;
    if (s == "cross") return Provenance::Cross;
    if (s == "hexagonal") return Provenance::Hexagonal;
    if (s == "custom") return Provenance::Custom;
    throw Error(ErrorKind::Io, "unknown provenance tag '" + s + "'");
}

struct BeamNetwork {
    std::vector<LatticeNode> nodes;
    std::vector<Strut> struts;
    Provenance provenance = Provenance::Custom;

    bool empty() const { return nodes.empty(); }

    /// Index of the node with the given id. Generated networks number nodes
    /// 1..N, which makes the common case O(1).
    std::size_t index_of(int id) const {
        if (id >= 1 && static_cast<std::size_t>(id) <= nodes.size() &&
            nodes[static_cast<std::size_t>(id - 1)].id == id) {
            return static_cast<std::size_t>(id - 1);
        }
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            if (nodes[i].id == id) return i;
        }
        throw Error(ErrorKind::Geometry, "node id " + std::to_string(id) + " does not exist");
    }

    const Vec3& position(int id) const { return nodes[index_of(id)].position; }

    double length(const Strut& s) const { return (position(s.node_b) - position(s.node_a)).norm(); }

    double total_length() const {
        double sum = 0.0;
        for (const auto& s : struts) sum += length(s);
        return sum;
    }
};

/// Union-find over node indices.
class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

    std::size_t find(std::size_t i) {
        while (parent_[i] != i) {
            parent_[i] = parent_[parent_[i]];
            i = parent_[i];
        }
        return i;
    }

    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent_[std::max(a, b)] = std::min(a, b);
    }

private:
    std::vector<std::size_t> parent_;
};

/// Component label per node index, labels numbered 0..k-1 in node order.
inline std::vector<int> component_labels(const BeamNetwork& net) {
    DisjointSets sets(net.nodes.size());
    for (const auto& s : net.struts) sets.unite(net.index_of(s.node_a), net.index_of(s.node_b));
    std::vector<int> labels(net.nodes.size(), -1);
    std::unordered_map<std::size_t, int> root_label;
    for (std::size_t i = 0; i < net.nodes.size(); ++i) {
        auto [it, inserted] = root_label.try_emplace(sets.find(i), static_cast<int>(root_label.size()));
        labels[i] = it->second;
    }
    return labels;
}

inline int component_count(const BeamNetwork& net) {
    const auto labels = component_labels(net);
    return labels.empty() ? 0 : 1 + *std::max_element(labels.begin(), labels.end());
}

inline bool is_connected(const BeamNetwork& net) { return component_count(net) <= 1; }

namespace detail {

struct CellKey {
    std::int64_t x, y, z;
    bool operator==(const CellKey&) const = default;
};

struct CellKeyHash {
    std::size_t operator()(const CellKey& k) const noexcept {
        std::size_t h = std::hash<std::int64_t>{}(k.x);
        h ^= std::hash<std::int64_t>{}(k.y) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        h ^= std::hash<std::int64_t>{}(k.z) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }
};

inline std::uint64_t pair_key(std::size_t a, std::size_t b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint64_t>(b);
}

}  // namespace detail

/// Spatial-hash point welder. Points within `tolerance` of an existing point
/// resolve to that point's index.
class PointWelder {
public:
    explicit PointWelder(double tolerance = kMergeTolerance) : tol_(tolerance) {}

    std::size_t insert(const Vec3& p) {
        const detail::CellKey base = key(p);
        for (std::int64_t dx = -1; dx <= 1; ++dx)
            for (std::int64_t dy = -1; dy <= 1; ++dy)
                for (std::int64_t dz = -1; dz <= 1; ++dz) {
                    auto it = cells_.find({base.x + dx, base.y + dy, base.z + dz});
                    if (it == cells_.end()) continue;
                    for (std::size_t idx : it->second) {
                        if ((points_[idx] - p).norm() < tol_) return idx;
                    }
                }
        points_.push_back(p);
        cells_[base].push_back(points_.size() - 1);
        return points_.size() - 1;
    }

    const std::vector<Vec3>& points() const { return points_; }

private:
    detail::CellKey key(const Vec3& p) const {
        return {static_cast<std::int64_t>(std::floor(p.x() / tol_)),
                static_cast<std::int64_t>(std::floor(p.y() / tol_)),
                static_cast<std::int64_t>(std::floor(p.z() / tol_))};
    }

    double tol_;
    std::vector<Vec3> points_;
    std::unordered_map<detail::CellKey, std::vector<std::size_t>, detail::CellKeyHash> cells_;
};

/// Accumulates segments into a network, welding coincident endpoints and
/// dropping degenerate or repeated struts. Node ids follow first insertion.
class NetworkBuilder {
public:
    explicit NetworkBuilder(Provenance provenance, double tolerance = kMergeTolerance)
        : welder_(tolerance), tol_(tolerance) {
        net_.provenance = provenance;
    }

    int add_node(const Vec3& p) {
        const std::size_t idx = welder_.insert(p);
        if (idx == net_.nodes.size()) net_.nodes.push_back({static_cast<int>(idx) + 1, p});
        return static_cast<int>(idx) + 1;
    }

    /// Returns false when the strut was degenerate or already present.
    bool add_strut(const Vec3& a, const Vec3& b, double side) {
        if ((b - a).norm() <= tol_) return false;
        return add_strut(add_node(a), add_node(b), side);
    }

    bool add_strut(int a, int b, double side) {
        if (a == b) return false;
        const auto key = detail::pair_key(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
        if (!seen_.insert(key).second) return false;
        net_.struts.push_back({a, b, side});
        return true;
    }

    const BeamNetwork& network() const { return net_; }
    BeamNetwork take() { return std::move(net_); }

private:
    PointWelder welder_;
    double tol_;
    BeamNetwork net_;
    std::unordered_set<std::uint64_t> seen_;
};

/// Re-welds a network: coincident nodes merged, duplicate and degenerate
/// struts removed, ids renumbered 1..N in first-seen order.
inline BeamNetwork merge_coincident(const BeamNetwork& net, double tolerance = kMergeTolerance) {
    NetworkBuilder builder(net.provenance, tolerance);
    std::vector<int> remap(net.nodes.size());
    for (std::size_t i = 0; i < net.nodes.size(); ++i) remap[i] = builder.add_node(net.nodes[i].position);
    for (const auto& s : net.struts) {
        builder.add_strut(remap[net.index_of(s.node_a)], remap[net.index_of(s.node_b)], s.side);
    }
    return builder.take();
}

/// Keeps only the component holding the most strut length; ids renumbered 1..N.
inline BeamNetwork largest_component(const BeamNetwork& net) {
    if (net.nodes.empty()) return net;
    const auto labels = component_labels(net);
    const int count = 1 + *std::max_element(labels.begin(), labels.end());
    if (count == 1) return net;
    std::vector<double> weight(static_cast<std::size_t>(count), 0.0);
    for (const auto& s : net.struts) weight[static_cast<std::size_t>(labels[net.index_of(s.node_a)])] += net.length(s);
    const int keep = static_cast<int>(std::max_element(weight.begin(), weight.end()) - weight.begin());

    NetworkBuilder builder(net.provenance);
    for (const auto& s : net.struts) {
        if (labels[net.index_of(s.node_a)] != keep) continue;
        builder.add_strut(net.position(s.node_a), net.position(s.node_b), s.side);
    }
    return builder.take();
}

/// Checks the structural invariants every network must satisfy; throws a
/// geometry error naming the first offending node or strut.
inline void validate_network(const BeamNetwork& net, double tolerance = kMergeTolerance) {
    std::unordered_set<int> ids;
    for (const auto& n : net.nodes) {
        if (!ids.insert(n.id).second) throw Error(ErrorKind::Geometry, "duplicate node id " + std::to_string(n.id));
        if (!n.position.allFinite()) throw Error(ErrorKind::Geometry, "node " + std::to_string(n.id) + " has a non-finite position");
    }
    std::unordered_set<std::uint64_t> pairs;
    for (std::size_t k = 0; k < net.struts.size(); ++k) {
        const auto& s = net.struts[k];
        const std::string label = "strut " + std::to_string(k) + " (" + std::to_string(s.node_a) + "-" + std::to_string(s.node_b) + ")";
        if (s.node_a == s.node_b) throw Error(ErrorKind::Geometry, label + " joins a node to itself");
        if (!ids.count(s.node_a) || !ids.count(s.node_b)) throw Error(ErrorKind::Geometry, label + " references a missing node");
        if (!(s.side > 0.0) || !std::isfinite(s.side)) throw Error(ErrorKind::Geometry, label + " has a non-positive section side");
        if (net.length(s) <= tolerance) throw Error(ErrorKind::Geometry, label + " is shorter than the merge tolerance");
        const auto key = detail::pair_key(static_cast<std::size_t>(s.node_a), static_cast<std::size_t>(s.node_b));
        if (!pairs.insert(key).second) throw Error(ErrorKind::Geometry, label + " duplicates an earlier strut");
    }
}

/// Mass in kg for a density in kg/mm^3: sum of side^2 * length * density.
inline double network_mass(const BeamNetwork& net, double density) {
    if (!(density > 0.0)) throw Error(ErrorKind::ParameterDomain, "density must be positive");
    double mass = 0.0;
    for (const auto& s : net.struts) mass += s.side * s.side * net.length(s) * density;
    return mass;
}

/// Rigid motion x -> R x + t applied to every node.
inline BeamNetwork transformed(BeamNetwork net, const Mat3& rotation, const Vec3& translation = Vec3::Zero()) {
    for (auto& n : net.nodes) n.position = rotation * n.position + translation;
    return net;
}

/// Places `b` next to `a` without welding; b's ids are shifted past a's.
inline BeamNetwork disjoint_union(const BeamNetwork& a, const BeamNetwork& b) {
    BeamNetwork out = a;
    int offset = 0;
    for (const auto& n : a.nodes) offset = std::max(offset, n.id);
    for (const auto& n : b.nodes) out.nodes.push_back({n.id + offset, n.position});
    for (const auto& s : b.struts) out.struts.push_back({s.node_a + offset, s.node_b + offset, s.side});
    return out;
}

inline std::pair<Vec3, Vec3> bounding_box(const BeamNetwork& net) {
    Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
    Vec3 hi = -lo;
    for (const auto& n : net.nodes) {
        lo = lo.cwiseMin(n.position);
        hi = hi.cwiseMax(n.position);
    }
    return {lo, hi};
}

/// Minimum distance over all node pairs, O(N^2); for checks and tests.
inline double min_node_distance(const BeamNetwork& net) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < net.nodes.size(); ++i)
        for (std::size_t j = i + 1; j < net.nodes.size(); ++j)
            best = std::min(best, (net.nodes[i].position - net.nodes[j].position).norm());
    return best;
}

}  // namespace lattice

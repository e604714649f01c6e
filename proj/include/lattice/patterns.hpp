#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "lattice/network.hpp"

namespace lattice {

/// Axis-aligned footprint in the x-y plane, mm.
struct Rect {
    double x0 = 0.0;
    double y0 = 0.0;
    double x1 = 0.0;
    double y1 = 0.0;

    double width() const { return x1 - x0; }
    double depth() const { return y1 - y0; }
};

struct Segment2 {
    Eigen::Vector2d a;
    Eigen::Vector2d b;

    double length() const { return (b - a).norm(); }
};

/// In-plane pattern before extrusion: the full clipped lines and the
/// segments they split into at crossings.
struct PlanarPattern {
    std::vector<Segment2> lines;
    std::vector<Segment2> segments;
};

/// Options shared by the 2.5D reference patterns.
struct ExtrusionOptions {
    /// Vertical spacing between stacked layers; defaults to the in-plane pitch.
    std::optional<double> layer_pitch;
};

namespace detail {

/// Liang-Barsky clip of segment p->q against the rectangle.
inline std::optional<Segment2> clip(const Eigen::Vector2d& p, const Eigen::Vector2d& q, const Rect& r) {
    const Eigen::Vector2d d = q - p;
    double t0 = 0.0;
    double t1 = 1.0;
    const double ps[4] = {-d.x(), d.x(), -d.y(), d.y()};
    const double qs[4] = {p.x() - r.x0, r.x1 - p.x(), p.y() - r.y0, r.y1 - p.y()};
    for (int i = 0; i < 4; ++i) {
        if (ps[i] == 0.0) {
            if (qs[i] < 0.0) return std::nullopt;
            continue;
        }
        const double t = qs[i] / ps[i];
        if (ps[i] < 0.0) {
            t0 = std::max(t0, t);
        } else {
            t1 = std::min(t1, t);
        }
        if (t0 > t1) return std::nullopt;
    }
    return Segment2{p + t0 * d, p + t1 * d};
}

inline Vec3 lift(const Eigen::Vector2d& p, double z) { return {p.x(), p.y(), z}; }

/// Stacks copies of a planar network at evenly spaced heights and joins
/// each in-plane node to its copy above.
inline BeamNetwork extrude(const BeamNetwork& planar, double height, double layer_pitch, double wall, Provenance tag) {
    int gaps = 0;
    if (height > kMergeTolerance) gaps = std::max(1, static_cast<int>(std::lround(height / layer_pitch)));
    NetworkBuilder builder(tag);
    for (int k = 0; k <= gaps; ++k) {
        const double z = gaps == 0 ? 0.0 : height * k / gaps;
        for (const auto& s : planar.struts) {
            Vec3 a = planar.position(s.node_a);
            Vec3 b = planar.position(s.node_b);
            a.z() = z;
            b.z() = z;
            builder.add_strut(a, b, wall);
        }
    }
    for (int k = 0; k < gaps; ++k) {
        const double z0 = height * k / gaps;
        const double z1 = height * (k + 1) / gaps;
        for (const auto& n : planar.nodes) {
            builder.add_strut(Vec3{n.position.x(), n.position.y(), z0}, Vec3{n.position.x(), n.position.y(), z1}, wall);
        }
    }
    return builder.take();
}

inline BeamNetwork planar_network(const std::vector<Segment2>& segments, double wall, Provenance tag) {
    NetworkBuilder builder(tag);
    for (const auto& s : segments) builder.add_strut(lift(s.a, 0.0), lift(s.b, 0.0), wall);
    return builder.take();
}

inline void check_extrusion(double wall, double height, const ExtrusionOptions& opt) {
    if (!(wall > 0.0)) throw Error(ErrorKind::ParameterDomain, "wall thickness must be positive");
    if (!(height >= 0.0)) throw Error(ErrorKind::ParameterDomain, "height must be non-negative");
    if (opt.layer_pitch && !(*opt.layer_pitch > 0.0)) throw Error(ErrorKind::ParameterDomain, "layer pitch must be positive");
}

}  // namespace detail

/// Diagonal grid at +-45 degrees anchored at the region's min corner: lines
/// x - y = k*pitch and x + y = k*pitch (relative coordinates), clipped to the
/// region and split at every crossing. A pitch-square region holds one X.
inline PlanarPattern planar_cross_pattern(const Rect& region, double pitch) {
    const double w = region.width();
    const double h = region.depth();
    const Eigen::Vector2d origin{region.x0, region.y0};
    const Rect local{0.0, 0.0, w, h};
    const double eps = kMergeTolerance;

    struct Line {
        Segment2 seg;
        double c;
        bool difference;  // u - v = c, else u + v = c
    };
    std::vector<Line> lines;
    const double reach = w + h;
    const int kmax_diff = static_cast<int>(std::floor(w / pitch + 1e-9));
    const int kmin_diff = -static_cast<int>(std::floor(h / pitch + 1e-9));
    for (int k = kmin_diff; k <= kmax_diff; ++k) {
        const double c = k * pitch;
        // u - v = c, parametrized along (1, 1)
        auto s = detail::clip({c - reach, -reach}, {c + reach, reach}, local);
        if (s && s->length() > eps) lines.push_back({*s, c, true});
    }
    const int kmax_sum = static_cast<int>(std::floor((w + h) / pitch + 1e-9));
    for (int k = 0; k <= kmax_sum; ++k) {
        const double c = k * pitch;
        auto s = detail::clip({c + reach, -reach}, {c - reach, reach}, local);
        if (s && s->length() > eps) lines.push_back({*s, c, false});
    }

    PlanarPattern out;
    for (const auto& line : lines) {
        const Eigen::Vector2d dir = (line.seg.b - line.seg.a).normalized();
        const double len = line.seg.length();
        std::vector<double> cuts{0.0, len};
        for (const auto& other : lines) {
            if (other.difference == line.difference) continue;
            const double cd = line.difference ? line.c : other.c;
            const double cs = line.difference ? other.c : line.c;
            const Eigen::Vector2d x{(cd + cs) / 2.0, (cs - cd) / 2.0};
            const double t = (x - line.seg.a).dot(dir);
            if (t > eps && t < len - eps && (x - line.seg.a - t * dir).norm() < eps) {
                if (x.x() >= -eps && x.x() <= w + eps && x.y() >= -eps && x.y() <= h + eps) cuts.push_back(t);
            }
        }
        std::sort(cuts.begin(), cuts.end());
        out.lines.push_back({line.seg.a + origin, line.seg.b + origin});
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            if (cuts[i + 1] - cuts[i] <= eps) continue;
            out.segments.push_back({line.seg.a + cuts[i] * dir + origin, line.seg.a + cuts[i + 1] * dir + origin});
        }
    }
    return out;
}

/// Flat-topped regular hexagons of circumradius `cell_size`, the first one
/// inscribed in the region's min corner, every edge clipped to the region.
/// Shared edges appear once.
inline PlanarPattern planar_hexagonal_pattern(const Rect& region, double cell_size) {
    const double r = cell_size;
    const double row = std::sqrt(3.0) * r;
    const int cols = static_cast<int>(std::ceil(region.width() / (1.5 * r))) + 2;
    const int rows = static_cast<int>(std::ceil(region.depth() / row)) + 2;

    // vertices on the boundary may land an ulp outside it
    const double slack = 1e-9 * std::max(1.0, r);
    const Rect grown{region.x0 - slack, region.y0 - slack, region.x1 + slack, region.y1 + slack};

    PlanarPattern out;
    NetworkBuilder dedupe(Provenance::Hexagonal);
    for (int i = -1; i <= cols; ++i) {
        for (int j = -2; j <= rows; ++j) {
            const Eigen::Vector2d center{region.x0 + r + 1.5 * r * i,
                                         region.y0 + 0.5 * row + row * j + ((i % 2 != 0) ? 0.5 * row : 0.0)};
            for (int v = 0; v < 6; ++v) {
                const double a0 = std::numbers::pi / 3.0 * v;
                const double a1 = std::numbers::pi / 3.0 * (v + 1);
                const Eigen::Vector2d p = center + r * Eigen::Vector2d{std::cos(a0), std::sin(a0)};
                const Eigen::Vector2d q = center + r * Eigen::Vector2d{std::cos(a1), std::sin(a1)};
                auto s = detail::clip(p, q, grown);
                if (!s || s->length() <= kMergeTolerance) continue;
                if (dedupe.add_strut(detail::lift(s->a, 0.0), detail::lift(s->b, 0.0), 1.0)) {
                    out.lines.push_back(*s);
                    out.segments.push_back(*s);
                }
            }
        }
    }
    return out;
}

/// 2.5D cross pattern as a beam network: the planar grid stacked over
/// `height` and tied with verticals. Struts get square sections of side
/// `wall`. Fragments cut off by clipping are dropped so the result is connected.
inline BeamNetwork generate_cross_pattern(const Rect& region, double pitch, double wall, double height,
                                          const ExtrusionOptions& opt = {}) {
    if (!(pitch > wall) || !(wall > 0.0)) throw Error(ErrorKind::ParameterDomain, "cross pattern needs pitch > wall > 0");
    detail::check_extrusion(wall, height, opt);
    if (region.width() < pitch - kMergeTolerance || region.depth() < pitch - kMergeTolerance) {
        throw Error(ErrorKind::EmptyPattern, "region is smaller than one pitch");
    }
    const auto planar = planar_cross_pattern(region, pitch);
    const auto net = largest_component(detail::planar_network(planar.segments, wall, Provenance::Cross));
    return detail::extrude(net, height, opt.layer_pitch.value_or(pitch), wall, Provenance::Cross);
}

inline BeamNetwork generate_hexagonal_pattern(const Rect& region, double cell_size, double wall, double height,
                                              const ExtrusionOptions& opt = {}) {
    if (!(cell_size > wall) || !(wall > 0.0)) throw Error(ErrorKind::ParameterDomain, "hexagonal pattern needs cell size > wall > 0");
    detail::check_extrusion(wall, height, opt);
    if (region.width() < 2.0 * cell_size - kMergeTolerance || region.depth() < std::sqrt(3.0) * cell_size - kMergeTolerance) {
        throw Error(ErrorKind::EmptyPattern, "region cannot hold one hexagon");
    }
    const auto planar = planar_hexagonal_pattern(region, cell_size);
    const auto net = largest_component(detail::planar_network(planar.segments, wall, Provenance::Hexagonal));
    return detail::extrude(net, height, opt.layer_pitch.value_or(cell_size), wall, Provenance::Hexagonal);
}

}  // namespace lattice

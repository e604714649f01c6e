#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "lattice/unit_cell.hpp"

using namespace lattice;

namespace {

/// Tabulated coordinate pattern of nodes 1..13, written out independently of
/// the generator. s = sin(beta/2), c = cos(beta/2).
std::array<Vec3, 13> table_coordinates(double a, double b, double cdim, double f, double beta) {
    const double s = f * std::sin(beta / 2.0);
    const double c = f * std::cos(beta / 2.0);
    return {{
        {+b / 2, -cdim / 2, a},          // 1
        {0, -cdim / 2, a},               // 2
        {-b / 2, -cdim / 2, a},          // 3
        {-b / 2, 0, a},                  // 4
        {-b / 2, cdim / 2, a},           // 5
        {0, cdim / 2, a},                // 6
        {+b / 2, cdim / 2, a},           // 7
        {+b / 2, 0, a},                  // 8
        {-b / 2 + s, -cdim / 2 + s, a - c},  // 9
        {b / 2 - s, -cdim / 2 + s, a - c},   // 10
        {b / 2 - s, cdim / 2 - s, a - c},    // 11
        {-b / 2 + s, cdim / 2 - s, a - c},   // 12
        {0, 0, 0},                       // 13
    }};
}

UnitCellParams cube(double side = 100.0) {
    UnitCellParams p;
    p.A = p.B = p.C = side;
    p.F = 0.1 * side;
    return p;
}

std::size_t brute_unique_count(const std::vector<Vec3>& pts, double tol) {
    std::vector<Vec3> unique;
    for (const auto& p : pts) {
        bool seen = false;
        for (const auto& q : unique) seen = seen || (p - q).norm() < tol;
        if (!seen) unique.push_back(p);
    }
    return unique.size();
}

Mat3 rot_z90() {
    Mat3 r;
    r << 0, -1, 0, 1, 0, 0, 0, 0, 1;
    return r;
}

}  // namespace

TEST(UnitCell, CubicCellCornersAndApex) {
    const auto net = build_unit_cell(cube());
    ASSERT_EQ(net.nodes.size(), 13u);
    EXPECT_EQ(net.position(13), Vec3(0, 0, 0));
    std::set<std::pair<double, double>> corners;
    for (int id : {1, 3, 5, 7}) {
        const Vec3& p = net.position(id);
        EXPECT_DOUBLE_EQ(p.z(), 100.0);
        EXPECT_DOUBLE_EQ(std::abs(p.x()), 50.0);
        EXPECT_DOUBLE_EQ(std::abs(p.y()), 50.0);
        corners.insert({p.x(), p.y()});
    }
    EXPECT_EQ(corners.size(), 4u);
    EXPECT_EQ(net.struts.size(), 20u);
    EXPECT_EQ(build_unit_cell([] { auto p = cube(); p.brace_ring = false; return p; }()).struts.size(), 16u);
}

TEST(UnitCell, LiteralModeMatchesTableFormulas) {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dim(20.0, 200.0);
    std::uniform_real_distribution<double> frac(0.05, 0.4);
    std::uniform_real_distribution<double> ang(0.2, 2.8);
    for (int trial = 0; trial < 200; ++trial) {
        UnitCellParams p;
        p.A = dim(rng);
        p.B = dim(rng);
        p.C = dim(rng);
        p.F = frac(rng) * std::min({p.A, p.B, p.C});
        p.beta = ang(rng);
        p.thickness = 0.05 * std::min({p.A, p.B, p.C});
        p.placement = NodePlacement::Literal;
        const auto expected = table_coordinates(p.A, p.B, p.C, p.F, *p.beta);
        const auto net = build_unit_cell(p);
        for (int id = 1; id <= 13; ++id) {
            const Vec3& got = net.position(id);
            const Vec3& want = expected[static_cast<std::size_t>(id - 1)];
            EXPECT_LE((got - want).norm(), 1e-12 * std::max(1.0, want.norm())) << "node " << id << " trial " << trial;
        }
    }
}

TEST(UnitCell, OnEdgeNodeAtArcDistanceF) {
    const auto net = build_unit_cell(cube());
    const Vec3 corner{50, -50, 100};
    const double slant = std::sqrt(100.0 * 100.0 + 50.0 * 50.0 + 50.0 * 50.0);
    EXPECT_NEAR(slant, 122.474, 1e-3);
    const Vec3 want = corner + 10.0 * (Vec3::Zero() - corner) / slant;
    EXPECT_LE((net.position(10) - want).norm(), 1e-12);
    EXPECT_NEAR(want.x(), 45.917, 1e-3);
    EXPECT_NEAR(want.y(), -45.917, 1e-3);
    EXPECT_NEAR(want.z(), 91.835, 1e-3);
}

TEST(UnitCell, OnEdgeNodesLieOnSlantEdges) {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> dim(10.0, 150.0);
    for (int trial = 0; trial < 100; ++trial) {
        UnitCellParams p;
        p.A = dim(rng);
        p.B = dim(rng);
        p.C = dim(rng);
        p.thickness = 0.01 * std::min({p.A, p.B, p.C});
        p.F = 0.3 * p.slant_length();
        const auto net = build_unit_cell(p);
        for (const auto& [corner, interior] : kCornerToInterior) {
            const Vec3 c = net.position(corner);
            const Vec3 x = net.position(interior);
            // collinear with the apex and at distance F from the corner
            EXPECT_LE(x.cross(c).norm(), 1e-12 * c.squaredNorm());
            EXPECT_NEAR((x - c).norm(), p.F, 1e-12 * p.slant_length());
        }
    }
}

TEST(UnitCell, ScalingScalesEveryNode) {
    for (auto mode : {NodePlacement::OnEdge, NodePlacement::Literal}) {
        UnitCellParams p;
        p.A = 37;
        p.B = 51;
        p.C = 44;
        p.F = 6;
        p.beta = 1.1;
        p.thickness = 2;
        p.placement = mode;
        UnitCellParams q = p;
        const double s = 4.0;  // power of two keeps the scaling exact
        q.A *= s;
        q.B *= s;
        q.C *= s;
        q.F *= s;
        const auto a = build_unit_cell(p);
        const auto b = build_unit_cell(q);
        for (int id = 1; id <= 13; ++id) EXPECT_EQ(b.position(id), s * a.position(id)) << id;
    }
}

TEST(UnitCell, FourFoldSymmetryForSquareFootprint) {
    UnitCellParams p = cube(60);
    p.A = 45;
    const auto net = build_unit_cell(p);
    const Mat3 r = rot_z90();
    auto find = [&net](const Vec3& q) {
        for (const auto& n : net.nodes)
            if ((n.position - q).norm() < 1e-9) return n.id;
        return 0;
    };
    std::set<std::pair<int, int>> struts;
    for (const auto& s : net.struts) struts.insert(std::minmax(s.node_a, s.node_b));
    for (const auto& n : net.nodes) EXPECT_NE(find(r * n.position), 0) << "node " << n.id;
    for (const auto& s : net.struts) {
        const int a = find(r * net.position(s.node_a));
        const int b = find(r * net.position(s.node_b));
        EXPECT_TRUE(struts.count(std::minmax(a, b))) << s.node_a << "-" << s.node_b;
    }
}

TEST(UnitCell, GammaStretchesDimensions) {
    UnitCellParams p = cube();
    p.gamma_x = 1.5;
    p.gamma_z = 0.5;
    const auto net = build_unit_cell(p);
    EXPECT_DOUBLE_EQ(net.position(1).x(), 75.0);
    EXPECT_DOUBLE_EQ(net.position(1).z(), 50.0);
    EXPECT_DOUBLE_EQ(net.position(1).y(), -50.0);
}

TEST(UnitCell, InvalidParametersRejected) {
    auto expect_kind = [](UnitCellParams p, ErrorKind kind) {
        try {
            build_unit_cell(p);
            ADD_FAILURE() << "expected an error";
        } catch (const Error& e) {
            EXPECT_EQ(e.kind(), kind) << e.what();
        }
    };
    auto p = cube();
    p.thickness = 0;
    expect_kind(p, ErrorKind::ParameterDomain);
    p = cube();
    p.thickness = 50;
    expect_kind(p, ErrorKind::ParameterDomain);
    p = cube();
    p.A = -1;
    expect_kind(p, ErrorKind::ParameterDomain);
    p = cube();
    p.beta = std::numbers::pi;
    expect_kind(p, ErrorKind::ParameterDomain);
    p = cube();
    p.placement = NodePlacement::Literal;  // beta missing
    expect_kind(p, ErrorKind::ParameterDomain);
    p = cube();
    p.F = 130;  // beyond the 122.47 mm slant edge
    expect_kind(p, ErrorKind::Geometry);
}

TEST(Tiling, IdentityCaseEqualsUnitCell) {
    const auto p = cube();
    const auto a = build_unit_cell(p);
    const auto b = tile(p, 1, 1, 1);
    ASSERT_EQ(a.nodes.size(), b.nodes.size());
    ASSERT_EQ(a.struts.size(), b.struts.size());
    for (std::size_t i = 0; i < a.nodes.size(); ++i) {
        EXPECT_EQ(a.nodes[i].id, b.nodes[i].id);
        EXPECT_EQ(a.nodes[i].position, b.nodes[i].position);
    }
    for (std::size_t i = 0; i < a.struts.size(); ++i) {
        EXPECT_EQ(a.struts[i].node_a, b.struts[i].node_a);
        EXPECT_EQ(a.struts[i].node_b, b.struts[i].node_b);
    }
    EXPECT_EQ(b.provenance, Provenance::UnitCell);
}

TEST(Tiling, TwoCellsShareThreeNodes) {
    const auto p = cube();
    const auto net = tile(p, 2, 1, 1);
    // brute-force oracle over both cells' raw nodes
    const auto cell = build_unit_cell(p);
    std::vector<Vec3> raw;
    for (int i = 0; i < 2; ++i)
        for (const auto& n : cell.nodes) raw.push_back(n.position + Vec3(100.0 * i, 0, 0));
    EXPECT_EQ(brute_unique_count(raw, 1e-6), 23u);
    EXPECT_EQ(net.nodes.size(), 23u);
    EXPECT_EQ(net.provenance, Provenance::Tiled);
}

TEST(Tiling, StrutCountMatchesPairwiseDuplicateScan) {
    const auto p = cube();
    for (auto [nx, ny, nz] : {std::array{2, 1, 1}, std::array{2, 2, 1}, std::array{3, 2, 2}, std::array{1, 1, 3}}) {
        const auto net = tile(p, nx, ny, nz);
        const auto cell = build_unit_cell(p);
        std::vector<std::pair<Vec3, Vec3>> segs;
        for (int k = 0; k < nz; ++k)
            for (int j = 0; j < ny; ++j)
                for (int i = 0; i < nx; ++i)
                    for (const auto& s : cell.struts) {
                        Vec3 a = cell.position(s.node_a);
                        Vec3 b = cell.position(s.node_b);
                        if (k % 2 == 1) {
                            a.z() = 100 - a.z();
                            b.z() = 100 - b.z();
                        }
                        const Vec3 off(100.0 * i, 100.0 * j, 100.0 * k);
                        segs.emplace_back(a + off, b + off);
                    }
        std::size_t duplicates = 0;
        for (std::size_t x = 0; x < segs.size(); ++x)
            for (std::size_t y = 0; y < x; ++y) {
                const bool same = ((segs[x].first - segs[y].first).norm() < 1e-6 && (segs[x].second - segs[y].second).norm() < 1e-6) ||
                                  ((segs[x].first - segs[y].second).norm() < 1e-6 && (segs[x].second - segs[y].first).norm() < 1e-6);
                if (same) {
                    ++duplicates;
                    break;
                }
            }
        EXPECT_EQ(net.struts.size(), static_cast<std::size_t>(nx * ny * nz) * cell.struts.size() - duplicates);
        EXPECT_TRUE(is_connected(net));
        EXPECT_GE(min_node_distance(net), 1e-6);
        EXPECT_NO_THROW(validate_network(net));
    }
}

TEST(Tiling, ReMergingIsIdempotent) {
    const auto net = tile(cube(), 3, 2, 2);
    const auto again = merge_coincident(net);
    ASSERT_EQ(again.nodes.size(), net.nodes.size());
    ASSERT_EQ(again.struts.size(), net.struts.size());
    for (std::size_t i = 0; i < net.nodes.size(); ++i) EXPECT_EQ(again.nodes[i].position, net.nodes[i].position);
}

TEST(Tiling, StackedLayersConnectApexToApex) {
    const auto net = tile(cube(), 1, 1, 2);
    EXPECT_EQ(net.nodes.size(), 13u + 13u - 8u);
    EXPECT_TRUE(is_connected(net));
    EXPECT_THROW(tile(cube(), 0, 1, 1), Error);
}

TEST(Mass, EmptyNetworkIsZero) { EXPECT_EQ(network_mass(BeamNetwork{}, 1.27e-6), 0.0); }

TEST(Mass, SingleStrutHandArithmetic) {
    BeamNetwork net;
    net.nodes = {{1, {0, 0, 0}}, {2, {100, 0, 0}}};
    net.struts = {{1, 2, 4.0}};
    EXPECT_NEAR(network_mass(net, 1.27e-6), 2.032e-3, 1e-15);
    EXPECT_THROW(network_mass(net, 0.0), Error);
}

TEST(Mass, AdditiveAndMonotoneInThickness) {
    auto p = cube();
    const auto a = build_unit_cell(p);
    const auto b = transformed(build_unit_cell(p), Mat3::Identity(), Vec3(500, 0, 0));
    const double rho = 1.27e-6;
    EXPECT_NEAR(network_mass(disjoint_union(a, b), rho), network_mass(a, rho) + network_mass(b, rho), 1e-15);
    double last = 0.0;
    for (double t = 0.5; t < 10.0; t += 0.5) {
        p.thickness = t;
        const double m = network_mass(build_unit_cell(p), rho);
        EXPECT_GT(m, last);
        last = m;
    }
}

TEST(Network, ValidationCatchesBadStruts) {
    BeamNetwork net;
    net.nodes = {{1, {0, 0, 0}}, {2, {1, 0, 0}}};
    net.struts = {{1, 2, 1.0}, {2, 1, 1.0}};
    EXPECT_THROW(validate_network(net), Error);
    net.struts = {{1, 3, 1.0}};
    EXPECT_THROW(validate_network(net), Error);
    net.nodes[1].position = Vec3(1e-9, 0, 0);
    net.struts = {{1, 2, 1.0}};
    EXPECT_THROW(validate_network(net), Error);
}

TEST(Network, ComponentsCountedByUnionFind) {
    const auto cell = build_unit_cell(cube());
    EXPECT_EQ(component_count(cell), 1);
    const auto two = disjoint_union(cell, transformed(cell, Mat3::Identity(), Vec3(300, 0, 0)));
    EXPECT_EQ(component_count(two), 2);
    const auto kept = largest_component(two);
    EXPECT_EQ(kept.nodes.size(), 13u);
}

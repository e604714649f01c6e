#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "lattice/patterns.hpp"
#include "lattice/sizing.hpp"
#include "lattice/unit_cell.hpp"

using namespace lattice;

namespace {

SizingProblem cantilever_problem() {
    SizingProblem p;
    p.network.nodes = {{1, {0, 0, 0}}, {2, {100, 0, 0}}};
    p.network.struts = {{1, 2, 4.0}};
    p.material = Material::petg();
    p.constraints = {{1, {true, true, true, true, true, true}}};
    NodalLoad l;
    l.node = 2;
    l.values(1) = -100;
    p.load = {"tip", {l}};
    return p;
}

// closed-form inversion of PL^3/(3EI) with I = t^4/12
double cantilever_oracle(double limit) { return std::pow(4.0 * 100.0 * 1e6 / (2800.0 * limit), 0.25); }

}  // namespace

TEST(Efficiency, PublishedYAxisProposed) { EXPECT_NEAR(structural_efficiency(0.518, 68.493e-3), 7.563, 1e-3); }

TEST(Efficiency, PublishedZAxisProposed) { EXPECT_NEAR(structural_efficiency(4.865, 68.493e-3), 71.029, 1e-2); }

TEST(Efficiency, ZeroDisplacementAndZeroMass) {
    EXPECT_EQ(structural_efficiency(0.0, 1.0), 0.0);
    try {
        structural_efficiency(1.0, 0.0);
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ParameterDomain);
    }
}

TEST(Improvement, PublishedValues) {
    EXPECT_NEAR(improvement(7.563, 4.544), 39.918, 1e-2);
    EXPECT_NEAR(improvement(71.029, 44.943), 36.72, 5e-2);
    EXPECT_EQ(improvement(3.0, 3.0), 0.0);
    EXPECT_THROW(improvement(0.0, 1.0), Error);
}

TEST(Improvement, EqualEfficienciesAreZeroBothWays) {
    std::mt19937 rng(2);
    std::uniform_real_distribution<double> u(0.01, 100);
    for (int i = 0; i < 100; ++i) {
        const double e = u(rng);
        EXPECT_EQ(improvement(e, e), 0.0);
    }
}

TEST(Report, PublishedYAndZRowsFromRawColumns) {
    // printed displacement and mass columns as inputs
    const std::vector<EfficiencyRecord> y{{"proposed", 0.518, 0, 68.493e-3, 0, {}}, {"cross", 0.365, 0, 80.327e-3, 0, {}},
                                          {"hexagonal", 0.366, 0, 73.897e-3, 0, {}}};
    const auto ry = make_report(Axis::Y, y);
    EXPECT_EQ(ry.reference, "proposed");
    EXPECT_FALSE(ry.records[0].improvement.has_value());
    const double eff_y[] = {7.563, 4.544, 4.953};
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(ry.records[i].efficiency / eff_y[i], 1.0, 1e-3) << i;
    EXPECT_NEAR(*ry.records[1].improvement / 39.918, 1.0, 1e-3);
    EXPECT_NEAR(*ry.records[2].improvement / 34.510, 1.0, 1e-3);

    const std::vector<EfficiencyRecord> z{{"proposed", 4.865, 0, 68.493e-3, 0, {}}, {"cross", 3.610, 0, 80.327e-3, 0, {}},
                                          {"hexagonal", 3.536, 0, 73.897e-3, 0, {}}};
    const auto rz = make_report(Axis::Z, z);
    const double eff_z[] = {71.029, 44.943, 47.851};
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(rz.records[i].efficiency / eff_z[i], 1.0, 1e-3) << i;
    EXPECT_NEAR(*rz.records[1].improvement / 36.726, 1.0, 1e-3);
    EXPECT_NEAR(*rz.records[2].improvement / 32.632, 1.0, 1e-3);
}

TEST(Report, XAxisProposedRowIsInconsistent) {
    // printed 0.432 mm/kg cannot come from 0.045 mm over 68.493 g
    const double eff = structural_efficiency(0.045, 68.493e-3);
    EXPECT_NEAR(eff, 0.657, 1e-3);
    EXPECT_GT(std::abs(eff - 0.432) / 0.432, 0.4);
}

TEST(Report, MatchesIndependentRecomputation) {
    std::mt19937 rng(6);
    std::uniform_real_distribution<double> d(0.01, 10), m(0.01, 0.2);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<EfficiencyRecord> raw;
        const int n = 1 + static_cast<int>(rng() % 5);
        for (int i = 0; i < n; ++i) raw.push_back({"p" + std::to_string(i), d(rng), 1.0, m(rng), 0, {}});
        const auto rep = make_report(Axis::X, raw);
        ASSERT_EQ(rep.records.size(), raw.size());
        const double ref = raw[0].max_displacement / raw[0].mass;
        for (int i = 0; i < n; ++i) {
            const double e = raw[i].max_displacement / raw[i].mass;
            EXPECT_EQ(rep.records[i].efficiency, e);
            if (i == 0) {
                EXPECT_FALSE(rep.records[i].improvement);
            } else {
                EXPECT_NEAR(*rep.records[i].improvement, (ref - e) / ref * 100, 1e-12 * std::max(1.0, std::abs(ref - e) / ref * 100));
            }
        }
    }
}

TEST(Report, SinglePatternHasNoImprovement) {
    const auto rep = make_report(Axis::Y, {{"only", 1.0, 2.0, 0.5, 0, {}}});
    ASSERT_EQ(rep.records.size(), 1u);
    EXPECT_FALSE(rep.records[0].improvement);
    EXPECT_EQ(rep.records[0].efficiency, 2.0);
}

TEST(Sizing, CantileverMatchesClosedForm) {
    SizingSpec spec{1.0, 1.0, 40.0, 1e-3};
    const auto r = size_thickness(spec, cantilever_problem());
    const double oracle = cantilever_oracle(1.0);
    EXPECT_NEAR(oracle, 19.441, 1e-3);
    EXPECT_FALSE(r.already_feasible);
    EXPECT_GE(r.thickness, oracle - 1e-9);
    EXPECT_LE(r.thickness - oracle, spec.tolerance);
    EXPECT_LE(r.displacement, 1.0);
    EXPECT_LE(r.iterations, spec.max_iterations());
    EXPECT_EQ(r.trace.size(), static_cast<std::size_t>(r.iterations) + 2);
    // 2-tolerance tightness
    EXPECT_GT(max_displacement_at(cantilever_problem(), r.thickness - 2 * spec.tolerance), 1.0);
}

TEST(Sizing, TraceMonotone) {
    const auto r = size_thickness(SizingSpec{1.0, 1.0, 40.0, 1e-3}, cantilever_problem());
    auto trace = r.trace;
    std::sort(trace.begin(), trace.end(), [](const auto& a, const auto& b) { return a.thickness < b.thickness; });
    for (std::size_t i = 1; i < trace.size(); ++i) EXPECT_LT(trace[i].displacement, trace[i - 1].displacement);
}

TEST(Sizing, AlreadyFeasibleReturnsLowerBound) {
    const auto r = size_thickness(SizingSpec{1000.0, 30.0, 40.0, 1e-3}, cantilever_problem());
    EXPECT_TRUE(r.already_feasible);
    EXPECT_EQ(r.thickness, 30.0);
    EXPECT_EQ(r.iterations, 0);
    EXPECT_EQ(r.trace.size(), 1u);
}

TEST(Sizing, InfeasibleUpperBound) {
    try {
        size_thickness(SizingSpec{1.0, 1.0, 10.0, 1e-3}, cantilever_problem());
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Infeasible);
    }
}

TEST(Sizing, SpecValidation) {
    EXPECT_THROW(size_thickness(SizingSpec{0, 1, 2, 1e-3}, cantilever_problem()), Error);
    EXPECT_THROW(size_thickness(SizingSpec{1, 2, 1, 1e-3}, cantilever_problem()), Error);
    EXPECT_THROW(size_thickness(SizingSpec{1, 1, 2, 0}, cantilever_problem()), Error);
}

TEST(Sizing, PropertyOnRandomMonotoneFunctions) {
    std::mt19937 rng(8);
    std::uniform_real_distribution<double> u(0.1, 5.0);
    for (int trial = 0; trial < 200; ++trial) {
        const double c = u(rng);
        const double p = u(rng);
        auto fn = [c, p](double t) { return c / std::pow(t, p); };
        SizingSpec spec;
        spec.t_lo = 0.1 * u(rng);
        spec.t_hi = spec.t_lo + 10 * u(rng);
        spec.tolerance = std::pow(10.0, -1.0 - static_cast<double>(rng() % 5));
        const double dlo = fn(spec.t_lo);
        const double dhi = fn(spec.t_hi);
        spec.displacement_limit = dhi + (dlo - dhi) * std::uniform_real_distribution<double>(0.01, 0.99)(rng);
        const auto r = size_thickness(spec, fn);
        EXPECT_LE(fn(r.thickness), spec.displacement_limit);
        EXPECT_LE(r.iterations, spec.max_iterations());
        if (r.thickness - 2 * spec.tolerance > spec.t_lo) {
            EXPECT_GT(fn(r.thickness - 2 * spec.tolerance), spec.displacement_limit);
        }
    }
}

TEST(Compare, FaceLoadSplitsForceEvenly) {
    const auto net = tile(UnitCellParams{}, 2, 2, 1);
    ComparisonSetup setup;
    const auto lc = face_load(net, setup, Axis::Z);
    double total = 0;
    for (const auto& l : lc.loads) total += l.values(2);
    EXPECT_NEAR(total, 100.0, 1e-12);
    EXPECT_FALSE(lc.loads.empty());
}

TEST(Compare, SmallCaseProducesOneReportPerDirection) {
    const Rect region{0, 0, 30, 40};
    UnitCellParams cell;
    cell.A = cell.B = cell.C = 10;
    cell.F = 1;
    cell.thickness = 0.5;
    std::vector<PatternCase> pats{{"proposed", tile(cell, 3, 4, 1)},
                                  {"cross", generate_cross_pattern(region, 10, 0.5, 10)},
                                  {"hexagonal", generate_hexagonal_pattern(region, 5, 0.5, 10)}};
    const auto reports = compare_patterns(pats, ComparisonSetup{}, {Axis::Y, Axis::X, Axis::Z});
    ASSERT_EQ(reports.size(), 3u);
    for (const auto& rep : reports) {
        EXPECT_FALSE(rep.error) << *rep.error;
        ASSERT_EQ(rep.records.size(), 3u);
        EXPECT_EQ(rep.reference, "proposed");
        for (const auto& r : rep.records) {
            EXPECT_GT(r.max_displacement, 0);
            EXPECT_GT(r.mass, 0);
            EXPECT_EQ(r.efficiency, r.max_displacement / r.mass);
        }
    }
}

TEST(Compare, FailedSolveAbortsThatDirection) {
    // two loose bars: the solver refuses the disconnected network
    BeamNetwork bars;
    bars.nodes = {{1, {0, 0, 0}}, {2, {0, 10, 0}}, {3, {5, 0, 0}}, {4, {5, 10, 0}}};
    bars.struts = {{1, 2, 1}, {3, 4, 1}};
    BeamNetwork ok;
    ok.nodes = {{1, {0, 0, 0}}, {2, {0, 10, 0}}};
    ok.struts = {{1, 2, 1}};
    const auto reports = compare_patterns({{"ok", ok}, {"bars", bars}}, ComparisonSetup{}, {Axis::Y, Axis::Z});
    ASSERT_EQ(reports.size(), 2u);
    for (const auto& rep : reports) {
        ASSERT_TRUE(rep.error.has_value());
        EXPECT_NE(rep.error->find("bars"), std::string::npos);
        EXPECT_TRUE(rep.records.empty());
    }
}

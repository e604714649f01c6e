#pragma once

#include <cmath>
#include <concepts>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lattice/frame.hpp"

namespace lattice {

// ---------------------------------------------------------------------------
// Efficiency metrics
// ---------------------------------------------------------------------------

/// Maximum displacement per unit mass, mm/kg.
inline double structural_efficiency(double max_displacement, double mass) {
    if (!(mass > 0.0)) throw Error(ErrorKind::ParameterDomain, "mass must be positive to compute structural efficiency");
    return max_displacement / mass;
}

/// Relative efficiency difference in percent, positive when `other` is lower.
inline double improvement(double eff_reference, double eff_other) {
    if (!(eff_reference > 0.0)) throw Error(ErrorKind::ParameterDomain, "reference efficiency must be positive");
    return (eff_reference - eff_other) / eff_reference * 100.0;
}

// ---------------------------------------------------------------------------
// Thickness sizing
// ---------------------------------------------------------------------------

struct SizingSpec {
    double displacement_limit = 1.0;  // mm
    double t_lo = 0.5;                // mm
    double t_hi = 10.0;               // mm
    double tolerance = 1e-3;          // mm

    void validate() const {
        if (!(displacement_limit > 0.0)) throw Error(ErrorKind::ParameterDomain, "displacement limit must be positive");
        if (!(t_lo > 0.0 && t_lo < t_hi)) throw Error(ErrorKind::ParameterDomain, "thickness bounds must satisfy 0 < t_lo < t_hi");
        if (!(tolerance > 0.0)) throw Error(ErrorKind::ParameterDomain, "sizing tolerance must be positive");
    }

    /// Upper bound on bisection steps once the bracket is established.
    int max_iterations() const { return static_cast<int>(std::ceil(std::log2((t_hi - t_lo) / tolerance))) + 1; }
};

struct SizingStep {
    double thickness;
    double displacement;
};

struct SizingResult {
    double thickness = 0.0;
    double displacement = 0.0;
    bool already_feasible = false;
    int iterations = 0;  // bisection steps, excluding the two bound evaluations
    std::vector<SizingStep> trace;
};

/// Smallest thickness meeting the displacement limit, by bisection.
///
/// `displacement_at(t)` must be strictly decreasing in t. The returned
/// thickness is the upper end of the final bracket, so it is always feasible
/// and within `tolerance` of the infeasible lower end.
template <std::invocable<double> DisplacementFn>
SizingResult size_thickness(const SizingSpec& spec, DisplacementFn&& displacement_at) {
    spec.validate();
    SizingResult result;
    auto eval = [&](double t) {
        const double d = displacement_at(t);
        result.trace.push_back({t, d});
        return d;
    };

    const double d_lo = eval(spec.t_lo);
    if (d_lo <= spec.displacement_limit) {
        result.thickness = spec.t_lo;
        result.displacement = d_lo;
        result.already_feasible = true;
        return result;
    }
    const double d_hi = eval(spec.t_hi);
    if (d_hi > spec.displacement_limit) {
        throw Error(ErrorKind::Infeasible, "displacement " + std::to_string(d_hi) + " mm at t_hi = " + std::to_string(spec.t_hi) +
                                               " mm exceeds the limit " + std::to_string(spec.displacement_limit) + " mm");
    }

    double lo = spec.t_lo;
    double hi = spec.t_hi;
    double d_best = d_hi;
    while (hi - lo > spec.tolerance) {
        const double mid = 0.5 * (lo + hi);
        const double d = eval(mid);
        ++result.iterations;
        if (d <= spec.displacement_limit) {
            hi = mid;
            d_best = d;
        } else {
            lo = mid;
        }
    }
    result.thickness = hi;
    result.displacement = d_best;
    return result;
}

/// Structural side of a sizing run: every strut takes the trial thickness.
struct SizingProblem {
    BeamNetwork network;
    Material material;
    std::vector<NodeConstraint> constraints;
    LoadCase load;
};

inline double max_displacement_at(const SizingProblem& problem, double thickness) {
    BeamNetwork net = problem.network;
    for (auto& s : net.struts) s.side = thickness;
    StructuralModel model = StructuralModel::from_network(std::move(net), problem.material);
    model.constraints = problem.constraints;
    return StaticSolver(std::move(model)).solve(problem.load).max_displacement;
}

inline SizingResult size_thickness(const SizingSpec& spec, const SizingProblem& problem) {
    return size_thickness(spec, [&problem](double t) { return max_displacement_at(problem, t); });
}

// ---------------------------------------------------------------------------
// Pattern comparison
// ---------------------------------------------------------------------------

enum class Axis { X = 0, Y = 1, Z = 2 };

inline const char* to_string(Axis a) {
    switch (a) {
    case Axis::X: return "X";
    case Axis::Y: return "Y";
    case Axis::Z: return "Z";
    }
    return "X";
}

struct EfficiencyRecord {
    std::string pattern;
    double max_displacement = 0.0;  // mm
    double max_stress = 0.0;        // MPa, beam stress estimate
    double mass = 0.0;              // kg
    double efficiency = 0.0;        // mm/kg
    std::optional<double> improvement;  // %, empty for the reference
};

struct ComparisonReport {
    Axis direction = Axis::X;
    std::vector<EfficiencyRecord> records;
    std::string reference;
    std::optional<std::string> error;  // set when a solve aborted this direction
};

/// Fills efficiency and improvement from raw displacement, stress and mass.
/// The first record is the reference.
inline ComparisonReport make_report(Axis direction, std::vector<EfficiencyRecord> raw) {
    ComparisonReport report;
    report.direction = direction;
    if (raw.empty()) return report;
    for (auto& r : raw) {
        r.efficiency = structural_efficiency(r.max_displacement, r.mass);
        r.improvement.reset();
    }
    report.reference = raw.front().pattern;
    for (std::size_t i = 1; i < raw.size(); ++i) raw[i].improvement = improvement(raw.front().efficiency, raw[i].efficiency);
    report.records = std::move(raw);
    return report;
}

/// Nodes lying on the min or max face of the network's bounding box.
struct FaceSelector {
    Axis axis = Axis::Y;
    bool max_side = false;

    std::vector<int> select(const BeamNetwork& net, double tol = 1e-6) const {
        const auto [lo, hi] = bounding_box(net);
        const int k = static_cast<int>(axis);
        const double target = max_side ? hi(k) : lo(k);
        std::vector<int> ids;
        for (const auto& n : net.nodes)
            if (std::abs(n.position(k) - target) <= tol) ids.push_back(n.id);
        return ids;
    }
};

struct PatternCase {
    std::string name;
    BeamNetwork network;
};

/// Shared boundary conditions for a comparison: the support face is fully
/// fixed and `total_force` is split evenly over the loaded face's nodes,
/// pointing along each requested direction.
struct ComparisonSetup {
    Material material = Material::petg();
    FaceSelector support{Axis::Y, false};
    FaceSelector loaded{Axis::Y, true};
    double total_force = 100.0;  // N
};

inline LoadCase face_load(const BeamNetwork& net, const ComparisonSetup& setup, Axis direction) {
    const auto ids = setup.loaded.select(net);
    if (ids.empty()) throw Error(ErrorKind::Geometry, "loaded face selects no nodes");
    LoadCase lc;
    lc.name = to_string(direction);
    const double share = setup.total_force / static_cast<double>(ids.size());
    for (int id : ids) {
        NodalLoad l;
        l.node = id;
        l.values(static_cast<int>(direction)) = share;
        lc.loads.push_back(l);
    }
    return lc;
}

/// One report per direction; the first pattern is the reference. A failed
/// solve leaves that direction's report empty with the cause in `error`.
inline std::vector<ComparisonReport> compare_patterns(const std::vector<PatternCase>& patterns, const ComparisonSetup& setup,
                                                      const std::vector<Axis>& directions) {
    struct Solved {
        std::unique_ptr<StaticSolver> solver;
        double mass = 0.0;
        std::optional<std::string> error;
    };
    std::vector<Solved> solved(patterns.size());
    for (std::size_t p = 0; p < patterns.size(); ++p) {
        try {
            solved[p].mass = network_mass(patterns[p].network, setup.material.density);
            StructuralModel model = StructuralModel::from_network(patterns[p].network, setup.material);
            const auto support = setup.support.select(model.network);
            if (support.empty()) throw Error(ErrorKind::Geometry, "support face selects no nodes");
            for (int id : support) model.constraints.push_back({id, {true, true, true, true, true, true}});
            solved[p].solver = std::make_unique<StaticSolver>(std::move(model));
        } catch (const Error& e) {
            solved[p].error = "pattern '" + patterns[p].name + "': " + e.what();
        }
    }

    std::vector<ComparisonReport> reports;
    for (Axis dir : directions) {
        std::vector<EfficiencyRecord> raw;
        std::optional<std::string> error;
        for (std::size_t p = 0; p < patterns.size() && !error; ++p) {
            if (solved[p].error) {
                error = solved[p].error;
                break;
            }
            try {
                const auto& solver = *solved[p].solver;
                const SolveResult r = solver.solve(face_load(solver.model().network, setup, dir));
                raw.push_back({patterns[p].name, r.max_displacement, r.max_stress(), solved[p].mass, 0.0, std::nullopt});
            } catch (const Error& e) {
                error = "pattern '" + patterns[p].name + "': " + e.what();
            }
        }
        if (error) {
            ComparisonReport failed;
            failed.direction = dir;
            failed.reference = patterns.empty() ? "" : patterns.front().name;
            failed.error = error;
            reports.push_back(std::move(failed));
        } else {
            reports.push_back(make_report(dir, std::move(raw)));
        }
    }
    return reports;
}

}  // namespace lattice

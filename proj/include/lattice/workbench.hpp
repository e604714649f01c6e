#pragma once

#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "lattice/config.hpp"

namespace lattice {

/// Process exit codes; each error kind maps to its own value.
enum class ExitCode : int {
    Ok = 0,
    Usage = 1,
    Config = 2,
    ParameterDomain = 3,
    Geometry = 4,
    EmptyPattern = 5,
    Disconnected = 6,
    Mechanism = 7,
    Infeasible = 8,
    Mismatch = 9,
    Io = 10,
    PrintabilityFailed = 11,
};

inline ExitCode exit_code_for(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::ParameterDomain: return ExitCode::ParameterDomain;
    case ErrorKind::Geometry: return ExitCode::Geometry;
    case ErrorKind::EmptyPattern: return ExitCode::EmptyPattern;
    case ErrorKind::Disconnected: return ExitCode::Disconnected;
    case ErrorKind::Mechanism: return ExitCode::Mechanism;
    case ErrorKind::Infeasible: return ExitCode::Infeasible;
    case ErrorKind::Mismatch: return ExitCode::Mismatch;
    case ErrorKind::Io: return ExitCode::Io;
    case ErrorKind::Config: return ExitCode::Config;
    }
    return ExitCode::Usage;
}

struct RunFlags {
    std::optional<std::string> out;     // overrides the config's output path for the verb
    std::optional<std::string> format;  // export: stl | obj | json
};

inline constexpr std::array<const char*, 6> kVerbs{"generate", "solve", "size", "compare", "check", "export"};

namespace detail {

/// Four significant digits for human-readable output.
inline std::string sig4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

inline std::string vec_text(const Vec3& v) { return "(" + sig4(v.x()) + ", " + sig4(v.y()) + ", " + sig4(v.z()) + ")"; }

inline void require_analysis_inputs(const WorkbenchConfig& cfg) {
    std::vector<std::string> missing;
    if (cfg.constraints.empty()) missing.push_back("constraints: required for this command");
    if (cfg.load.loads.empty()) missing.push_back("loads: required for this command");
    if (!missing.empty()) throw ConfigError(std::move(missing));
}

inline void run_generate(const WorkbenchConfig& cfg, const RunFlags& flags, std::ostream& out) {
    const auto& net = cfg.network;
    const auto [lo, hi] = bounding_box(net);
    out << "network: " << to_string(net.provenance) << ", " << net.nodes.size() << " nodes, " << net.struts.size() << " struts\n";
    out << "bounding box: " << vec_text(lo) << " to " << vec_text(hi) << " mm\n";
    out << "total strut length: " << sig4(net.total_length()) << " mm\n";
    out << "mass: " << sig4(network_mass(net, cfg.material.density)) << " kg\n";
    out << "connected: " << (is_connected(net) ? "yes" : "no") << "\n";
    if (auto path = flags.out ? flags.out : cfg.output.json) {
        const auto bytes = io::export_network_json(net, *path);
        out << "wrote " << *path << " (" << bytes << " bytes)\n";
    }
}

inline void run_solve(const WorkbenchConfig& cfg, std::ostream& out) {
    require_analysis_inputs(cfg);
    const StaticSolver solver(cfg.model());
    const SolveResult r = solver.solve(cfg.load);
    const auto& net = cfg.network;
    out << "max displacement: " << sig4(r.max_displacement) << " mm at node " << r.max_displacement_node << "\n";
    out << "displacement at node " << r.max_displacement_node << ": "
        << vec_text(r.translation(net, r.max_displacement_node)) << " mm\n";
    out << "max beam stress estimate: " << sig4(r.max_stress()) << " MPa\n";
    Vec3 total = Vec3::Zero();
    out << "reactions (N, N*mm):\n";
    const auto mask = solver.model().fixed_mask();
    for (const auto& n : net.nodes) {
        const std::size_t base = kDofsPerNode * net.index_of(n.id);
        bool any = false;
        for (int d = 0; d < kDofsPerNode; ++d) any = any || mask[base + static_cast<std::size_t>(d)];
        if (!any) continue;
        const Vec6 rv = r.reactions.segment<6>(static_cast<Eigen::Index>(base));
        total += rv.head<3>();
        out << "  node " << n.id << ": F " << vec_text(rv.head<3>()) << "  M " << vec_text(rv.tail<3>()) << "\n";
    }
    out << "reaction total: " << vec_text(total) << " N\n";
    out << "relative residual: " << sig4(r.residual) << "\n";
    for (const auto& w : r.warnings) out << "warning: " << w << "\n";
    if (net.provenance == Provenance::UnitCell || net.provenance == Provenance::Tiled) {
        out << "note: beam-model result; boundary conditions are those given in the config\n";
    }
}

inline void run_size(const WorkbenchConfig& cfg, std::ostream& out) {
    if (!cfg.sizing) throw ConfigError({"sizing: required for the size command"});
    require_analysis_inputs(cfg);
    const SizingResult s = size_thickness(*cfg.sizing, cfg.sizing_problem());
    out << "sizing trace (thickness mm, max displacement mm):\n";
    for (const auto& step : s.trace) out << "  " << io::format_double(step.thickness) << "  " << io::format_double(step.displacement) << "\n";
    out << "t* = " << std::fixed;
    out.precision(3);
    out << s.thickness << " mm";
    out.unsetf(std::ios::floatfield);
    out << (s.already_feasible ? " (already feasible at t_lo)" : "") << "\n";
    out << "displacement at t*: " << sig4(s.displacement) << " mm (limit " << sig4(cfg.sizing->displacement_limit) << " mm)\n";
    out << "bisection steps: " << s.iterations << "\n";
}

inline void run_compare(const WorkbenchConfig& cfg, const RunFlags& flags, std::ostream& out) {
    if (!cfg.compare) throw ConfigError({"compare: required for the compare command"});
    const auto& c = *cfg.compare;
    ComparisonSetup setup;
    setup.material = cfg.material;
    setup.support = c.support;
    setup.loaded = c.loaded;
    setup.total_force = c.total_force;
    const auto reports = compare_patterns(build_patterns(c), setup, c.directions);

    bool failed = false;
    for (const auto& rep : reports) {
        out << to_string(rep.direction) << "-axis (reference: " << rep.reference << ")\n";
        if (rep.error) {
            out << "  aborted: " << *rep.error << "\n";
            failed = true;
            continue;
        }
        for (const auto& r : rep.records) {
            out << "  " << r.pattern << ": max displacement " << sig4(r.max_displacement) << " mm, max beam stress estimate "
                << sig4(r.max_stress) << " MPa, mass " << sig4(r.mass) << " kg, efficiency " << sig4(r.efficiency) << " mm/kg";
            if (r.improvement) out << ", improvement " << sig4(*r.improvement) << " %";
            out << "\n";
        }
    }
    out << "note: patterns fill a " << sig4(c.region.x()) << " x " << sig4(c.region.y()) << " x " << sig4(c.region.z())
        << " mm region as beam networks; the enclosing shell is not modeled and stresses are beam estimates.\n";
    if (auto path = flags.out ? flags.out : cfg.output.csv) {
        const auto bytes = io::write_file(*path, io::comparison_csv(reports));
        out << "wrote " << *path << " (" << bytes << " bytes)\n";
    } else {
        out << io::comparison_csv(reports);
    }
    if (failed) throw Error(ErrorKind::Mechanism, "one or more comparison directions failed to solve");
}

inline bool run_check(const WorkbenchConfig& cfg, std::ostream& out) {
    const auto rep = printability_check(cfg.network, cfg.printability);
    out << "build direction: " << vec_text(rep.build_direction) << ", overhang limit " << sig4(cfg.printability.overhang_limit_deg)
        << " deg, bridge max " << sig4(cfg.printability.bridge_max) << " mm\n";
    for (std::size_t e = 0; e < cfg.network.struts.size(); ++e) {
        const auto& s = cfg.network.struts[e];
        out << "  strut " << s.node_a << "-" << s.node_b << ": " << to_string(rep.classification[e]) << " (" << sig4(rep.angle_deg[e])
            << " deg)\n";
    }
    out << "self-supporting " << rep.count(StrutSupport::SelfSupporting) << ", bridge " << rep.count(StrutSupport::Bridge)
        << ", unsupported " << rep.count(StrutSupport::Unsupported) << "\n";
    out << "printability: " << (rep.pass ? "PASS" : "FAIL") << "\n";
    return rep.pass;
}

inline void run_export(const WorkbenchConfig& cfg, const RunFlags& flags, std::ostream& out) {
    struct Target {
        std::string format;
        std::string path;
    };
    std::vector<Target> targets;
    if (flags.format) {
        const auto& f = *flags.format;
        std::optional<std::string> path = flags.out;
        if (!path) path = f == "stl" ? cfg.output.stl : f == "obj" ? cfg.output.obj : f == "json" ? cfg.output.json : std::nullopt;
        if (f != "stl" && f != "obj" && f != "json") throw ConfigError({"--format: expected stl, obj or json"});
        if (!path) throw ConfigError({"output." + f + ": no path configured and --out not given"});
        targets.push_back({f, *path});
    } else {
        if (cfg.output.stl) targets.push_back({"stl", *cfg.output.stl});
        if (cfg.output.obj) targets.push_back({"obj", *cfg.output.obj});
        if (cfg.output.json) targets.push_back({"json", *cfg.output.json});
        if (targets.empty()) throw ConfigError({"output: no export path configured"});
    }
    for (const auto& t : targets) {
        std::size_t bytes = 0;
        if (t.format == "stl") {
            bytes = io::export_stl_solid(cfg.network, t.path);
        } else if (t.format == "obj") {
            bytes = io::export_obj_wireframe(cfg.network, t.path);
        } else {
            bytes = io::export_network_json(cfg.network, t.path);
        }
        out << "wrote " << t.path << " (" << t.format << ", " << bytes << " bytes)\n";
    }
}

}  // namespace detail

/// Runs one workbench verb. Library errors are reported on `err` and mapped
/// to their exit codes.
inline int run_command(const std::string& verb, const WorkbenchConfig& cfg, const RunFlags& flags, std::ostream& out,
                       std::ostream& err) {
    try {
        if (verb == "generate") {
            detail::run_generate(cfg, flags, out);
        } else if (verb == "solve") {
            detail::run_solve(cfg, out);
        } else if (verb == "size") {
            detail::run_size(cfg, out);
        } else if (verb == "compare") {
            detail::run_compare(cfg, flags, out);
        } else if (verb == "check") {
            if (!detail::run_check(cfg, out)) return static_cast<int>(ExitCode::PrintabilityFailed);
        } else if (verb == "export") {
            detail::run_export(cfg, flags, out);
        } else {
            err << "unknown command '" << verb << "'\n";
            return static_cast<int>(ExitCode::Usage);
        }
    } catch (const Error& e) {
        err << e.what() << "\n";
        return static_cast<int>(exit_code_for(e.kind()));
    }
    return static_cast<int>(ExitCode::Ok);
}

/// Parses config text then runs the verb.
inline int run_command(const std::string& verb, const std::string& config_text, const RunFlags& flags, std::ostream& out,
                       std::ostream& err) {
    WorkbenchConfig cfg;
    try {
        cfg = load_config(config_text);
    } catch (const Error& e) {
        err << e.what() << "\n";
        return static_cast<int>(exit_code_for(e.kind()));
    }
    return run_command(verb, cfg, flags, out, err);
}

}  // namespace lattice

#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "lattice/workbench.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Pyramidal lattice workbench: generate, solve, size, compare, check, export"};
    app.require_subcommand(1, 1);

    std::string config_path;
    lattice::RunFlags flags;
    std::string out_path;
    std::string format;

    const std::map<std::string, std::string> blurbs{
        {"generate", "build the unit cell or tiling and report its size and mass"},
        {"solve", "static frame solve, prints peak displacement and reactions"},
        {"size", "bisect the strut side to meet a displacement limit"},
        {"compare", "rank lattice patterns by displacement per unit mass"},
        {"check", "overhang and bridge printability report"},
        {"export", "write STL, OBJ or JSON geometry"},
    };
    for (const char* verb : lattice::kVerbs) {
        auto* sub = app.add_subcommand(verb, blurbs.at(verb));
        sub->add_option("-c,--config", config_path, "JSON workbench config")->required()->check(CLI::ExistingFile);
        sub->add_option("-o,--out", out_path, "output path overriding the config");
        if (std::string(verb) == "export") {
            sub->add_option("-f,--format", format, "stl, obj or json")->check(CLI::IsMember({"stl", "obj", "json"}));
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(lattice::ExitCode::Usage);
    }

    if (!out_path.empty()) flags.out = out_path;
    if (!format.empty()) flags.format = format;

    std::string text;
    try {
        text = lattice::io::read_file(config_path);
    } catch (const lattice::Error& e) {
        std::cerr << e.what() << "\n";
        return static_cast<int>(lattice::ExitCode::Io);
    }
    const std::string verb = app.get_subcommands().front()->get_name();
    return lattice::run_command(verb, text, flags, std::cout, std::cerr);
}

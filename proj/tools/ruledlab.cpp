#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ruledlab/cli.hpp"

int main(int argc, char** argv) {
    using namespace ruledlab::cli;
    CLI::App app{"Timelike ruled surfaces in Minkowski 3-space: analysis, synthesis, transversal surfaces"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1, 1);

    std::string config;
    std::string output_dir;
    std::optional<double> tolerance;
    const char* help[] = {
        "Analyze an explicit or synthesized surface",
        "Integrate the frame equations and the striction curve",
        "Build and check an alpha/beta/gamma transversal surface",
        "Run the theorem verification suite",
        "Export the surface as a Wavefront OBJ quad mesh",
    };
    const Command commands[] = {Command::Analyze, Command::Synthesize, Command::Transversal, Command::Verify,
                                Command::Mesh};
    for (std::size_t i = 0; i < 5; ++i) {
        CLI::App* sub = app.add_subcommand(to_string(commands[i]), help[i]);
        sub->add_option("--config", config, "JSON config file")->required();
        sub->add_option("--output-dir", output_dir, "Directory for relative output paths");
        sub->add_option("--tolerance", tolerance, "Override the general tolerance");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    const Command command = *parse_command(app.get_subcommands().front()->get_name());
    RunOptions options;
    if (!output_dir.empty()) options.output_dir = output_dir;
    options.tolerance = tolerance;
    return run_file(command, config, options, std::cerr);
}

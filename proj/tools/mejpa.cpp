// mejpa: design and simulation front end for flux-pumped, impedance-
// transformed Josephson parametric amplifiers with merged-element shunt
// capacitance.
//
// Usage: mejpa <command> --config <file> [--out <file>] [--format csv|json]
//               [--grid-points N]

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mejpa/config.hpp"
#include "mejpa/errors.hpp"
#include "mejpa/run.hpp"
#include "mejpa/version.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Josephson parametric amplifier design toolkit"};
    app.set_version_flag("--version", mejpa::version_string);
    app.require_subcommand(1);

    struct Options {
        std::string config_path;
        std::string out_path;
        std::string format;
        int grid_points = 0;
    };

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"junction", "Junction and SQUID parameters from process densities"},
        {"tune", "Resonant frequency versus DC flux bias"},
        {"gain", "Reflection-gain profile over the analysis grid"},
        {"sweep", "Gain metrics versus one design parameter"},
        {"optimize", "Gain flattening or bandwidth maximization"},
        {"noise", "Noise-temperature budget from SNR improvement"},
    };

    std::vector<std::shared_ptr<Options>> opts;
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        auto o = std::make_shared<Options>();
        sub->add_option("--config", o->config_path, "JSON run configuration")
            ->required();
        sub->add_option("--out", o->out_path, "Output file (default: stdout)");
        sub->add_option("--format", o->format, "Output format: csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--grid-points", o->grid_points,
                        "Override the analysis grid point count");
        opts.push_back(std::move(o));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        // usage problems are configuration errors in the exit-code contract
        return code == 0 ? 0 : 1;
    }

    for (std::size_t i = 0; i < commands.size(); ++i) {
        auto* sub = app.get_subcommand(commands[i].first);
        if (!sub->parsed()) continue;
        const Options& o = *opts[i];

        mejpa::RunConfig config;
        try {
            config = mejpa::load_config(o.config_path);
        } catch (const mejpa::ConfigError& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 1;
        }

        std::optional<mejpa::TableFormat> format;
        if (o.format == "csv") format = mejpa::TableFormat::csv;
        if (o.format == "json") format = mejpa::TableFormat::json;
        std::optional<int> grid_points;
        if (o.grid_points > 0) grid_points = o.grid_points;

        const auto cmd = mejpa::command_from_string(commands[i].first);
        return mejpa::run_command(*cmd, config, o.out_path, format, grid_points);
    }
    return 1;
}

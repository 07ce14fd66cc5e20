// Command-line driver: run a configured computation, validate a config, or
// reproduce the bound panels.
//
// Exit codes: 0 success, 1 config/schema error, 2 numerical failure
// (quadrature or truncation), 3 capability error (unsupported model or
// dimension cap).

#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "otoc/core/errors.hpp"
#include "otoc/io/config.hpp"
#include "otoc/io/runner.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_schema = 1;
constexpr int exit_numerical = 2;
constexpr int exit_capability = 3;

int dispatch(const std::function<int()>& body) {
    try {
        return body();
    } catch (const otoc::io::schema_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_schema;
    } catch (const otoc::numerical_error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return exit_numerical;
    } catch (const otoc::capability_error& e) {
        std::cerr << "capability error: " << e.what() << "\n";
        return exit_capability;
    } catch (const otoc::dimension_cap_error& e) {
        std::cerr << "capability error: " << e.what() << "\n";
        return exit_capability;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_numerical;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"out-of-time-ordered correlators for spin chains with bosonic environments"};
    app.require_subcommand(1);

    std::string run_config_path;
    CLI::App* cmd_run = app.add_subcommand("run", "execute a config and write its CSV");
    cmd_run->add_option("config", run_config_path, "configuration file")->required();

    std::string validate_config_path;
    CLI::App* cmd_validate =
        app.add_subcommand("validate", "check a config without running it");
    cmd_validate->add_option("config", validate_config_path, "configuration file")->required();

    std::string figure2_dir = "figure2";
    CLI::App* cmd_figure2 =
        app.add_subcommand("figure2", "emit the four dephasing-bound panels (N=20, lambda=0.1)");
    cmd_figure2->add_option("--out-dir", figure2_dir, "output directory");

    CLI11_PARSE(app, argc, argv);

    if (cmd_run->parsed()) {
        return dispatch([&] {
            const otoc::io::RunConfig cfg = otoc::io::parse_run_config_file(run_config_path);
            const otoc::io::RunResult result = otoc::io::run(cfg);
            std::cout << result.summary << "\n";
            return exit_ok;
        });
    }
    if (cmd_validate->parsed()) {
        return dispatch([&] {
            const otoc::io::RunConfig cfg =
                otoc::io::parse_run_config_file(validate_config_path);
            const otoc::io::ValidationReport rep = otoc::io::validate(cfg);
            for (const std::string& line : rep.lines) std::cout << line << "\n";
            if (rep.ok) {
                std::cout << "OK\n";
                return exit_ok;
            }
            return rep.capability_problem ? exit_capability : exit_schema;
        });
    }
    return dispatch([&] {
        const auto written = otoc::io::figure2(figure2_dir);
        for (const std::string& path : written) std::cout << "wrote " << path << "\n";
        return exit_ok;
    });
}

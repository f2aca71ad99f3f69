#include "pmeb/config.hpp"
#include "pmeb/errors.hpp"
#include "pmeb/experiment.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace {

std::filesystem::path timestamped_dir()
{
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    localtime_r(&now, &tm);
    std::ostringstream os;
    os << "runs/" << std::put_time(&tm, "%Y%m%d-%H%M%S");
    return os.str();
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Blow-up time bounds and simulations for a porous-medium equation with nonlocal source"};
    std::string config_path;
    std::string out_dir;
    std::string mode;
    bool quiet = false;
    app.add_option("config", config_path, "Experiment configuration file")->required();
    app.add_option("--out", out_dir, "Output directory (default: runs/<timestamp>)");
    app.add_option("--mode", mode, "Override the configured mode")
        ->check(CLI::IsMember({"bound-only", "simulate", "validate", "inequality-suite", "sweep"}));
    app.add_flag("--quiet", quiet, "Only print errors");
    CLI11_PARSE(app, argc, argv);

    try {
        auto config = pmeb::load_config(config_path);
        if (!mode.empty())
            config.mode = pmeb::parse_mode(mode);
        const std::filesystem::path dir = out_dir.empty() ? timestamped_dir() : std::filesystem::path(out_dir);
        const auto outcome = pmeb::run_experiment(config, dir);
        if (outcome.status == pmeb::exit_configuration)
            std::cerr << outcome.report;
        else if (!quiet)
            std::cout << outcome.report << "output: " << dir.string() << '\n';
        return outcome.status;
    } catch (const pmeb::ConfigurationError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return pmeb::exit_configuration;
    } catch (const pmeb::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return pmeb::exit_configuration;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return pmeb::exit_configuration;
    }
}

#include "hilop/experiments.hpp"
#include "hilop/parallel.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

int read_file(const std::string &path, std::string &out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        std::cerr << "error: cannot open " << path << "\n";
        return 2;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    out = ss.str();
    return 0;
}

int write_file(const std::string &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) {
        std::cerr << "error: cannot write " << path << "\n";
        return 2;
    }
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"hilop: numerical checks for Hilbert-type averaging operators"};
    app.set_version_flag("--version", "hilop 1.0.0");
    app.require_subcommand(1);

    std::string config_path, out_path, csv_path;
    unsigned jobs = 0;

    auto *run = app.add_subcommand("run", "run an experiment config and report its criteria");
    run->add_option("--config", config_path, "JSON config file")->required();
    run->add_option("--out", out_path, "write the JSON report here instead of stdout");
    run->add_option("--csv", csv_path, "also write the experiment's table as CSV");
    run->add_option("--jobs", jobs, "worker threads (0 = all cores)");

    auto *validate = app.add_subcommand("validate", "check a config without running it");
    validate->add_option("--config", config_path, "JSON config file")->required();

    auto *list = app.add_subcommand("list", "list the available experiments");

    CLI11_PARSE(app, argc, argv);

    if (list->parsed()) {
        for (const auto &[name, description] : hilop::experiments::experiment_catalog())
            std::cout << name << "  " << description << "\n";
        return 0;
    }

    std::string text;
    if (int rc = read_file(config_path, text)) return rc;

    if (validate->parsed()) {
        const auto v = hilop::experiments::validate_config_text(text);
        if (v.ok) {
            std::cout << "ok\n";
            return 0;
        }
        for (const auto &e : v.errors) std::cerr << e << "\n";
        return 2;
    }

    hilop::experiments::RunResult result;
    try {
        result = hilop::experiments::run_config_text(text, hilop::resolve_jobs(jobs));
    } catch (const std::invalid_argument &e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    // The config's own output block fills in whatever the flags left unset.
    if (!result.output_path.empty()) {
        if (result.output_format == "csv" && csv_path.empty())
            csv_path = result.output_path;
        else if (result.output_format != "csv" && out_path.empty())
            out_path = result.output_path;
    }

    if (out_path.empty()) {
        std::cout << result.report_json;
    } else if (int rc = write_file(out_path, result.report_json)) {
        return rc;
    }
    if (!csv_path.empty()) {
        if (int rc = write_file(csv_path, result.csv)) return rc;
    }
    return result.passed ? 0 : 1;
}

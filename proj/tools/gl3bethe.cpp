// Command-line front end: `gl3bethe verify ...` runs the selected verification suites and
// writes a JSON report. Exit codes: 0 no failure, 1 some check failed, 2 bad configuration.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "gl3bethe/driver.hpp"

namespace fs = std::filesystem;
using namespace gl3bethe;

namespace {

std::vector<std::string> split_list(const std::vector<std::string>& items) {
    std::vector<std::string> out;
    for (const auto& item : items) {
        std::stringstream ss(item);
        std::string part;
        while (std::getline(ss, part, ','))
            if (!part.empty()) out.push_back(part);
    }
    return out;
}

std::string default_output_path() {
    const char* dir = std::getenv("GL3BETHE_OUT_DIR");
    if (dir && *dir) return (fs::path(dir) / "report.json").string();
    return "report.json";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact verification of GL(3) composite-model Bethe vector identities"};
    app.set_version_flag("--version", std::string(tool_version));
    app.require_subcommand(1);
    auto* verify = app.add_subcommand("verify", "Run verification suites and write a JSON report");

    std::string config_path, out, split;
    std::vector<std::string> suites;
    std::optional<std::size_t> length, a_max, b_max, samples, max_length;
    std::optional<std::uint64_t> seed;
    std::size_t jobs = 1;
    bool timing = false;
    verify->add_option("--config", config_path, "JSON job configuration")->check(CLI::ExistingFile);
    verify->add_option("--suite", suites, "Suites to run (repeatable or comma separated)");
    verify->add_option("--L", length, "Chain length");
    verify->add_option("--split", split, "Cut position L1, or 'sweep' for every position");
    verify->add_option("--a", a_max, "Largest number of colour-1 parameters");
    verify->add_option("--b", b_max, "Largest number of colour-2 parameters");
    verify->add_option("--samples", samples, "Parameter draws per grid point");
    verify->add_option("--seed", seed, "Random seed");
    verify->add_option("--out", out, "Report path");
    verify->add_option("--max-L", max_length, "Largest admissible chain length (default 8)");
    verify->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
    verify->add_flag("--timing", timing, "Record wall time per check (the report is then no longer reproducible)");

    CLI11_PARSE(app, argc, argv);

    try {
        JobConfig cfg;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            nlohmann::json j;
            try {
                in >> j;
            } catch (const nlohmann::json::exception& e) {
                throw ConfigError(std::string("cannot parse config: ") + e.what());
            }
            cfg = parse_job_config(j);
        }
        if (!suites.empty()) cfg.suites = split_list(suites);
        if (length) {
            if (cfg.xi && cfg.xi->size() != *length) throw ConfigError("--L disagrees with the configured inhomogeneities");
            if (!cfg.kinds.empty() && cfg.kinds.size() != *length) throw ConfigError("--L disagrees with the configured site kinds");
            cfg.length = *length;
        }
        if (!split.empty()) {
            if (split == "sweep") cfg.split.reset();
            else {
                try {
                    cfg.split = static_cast<std::size_t>(std::stoul(split));
                } catch (const std::exception&) {
                    throw ConfigError("--split must be an integer or 'sweep'");
                }
            }
        }
        if (a_max) cfg.a_max = *a_max;
        if (b_max) cfg.b_max = *b_max;
        if (samples) cfg.samples = *samples;
        if (seed) cfg.seed = *seed;
        if (max_length) cfg.max_length = *max_length;
        if (!out.empty()) cfg.out = out;
        if (cfg.out.empty()) cfg.out = default_output_path();
        cfg.jobs = jobs;
        cfg.timing = timing;

        Report report = run(cfg);
        std::ofstream file(cfg.out);
        if (!file) throw ConfigError("cannot open report path " + cfg.out);
        file << report.to_json().dump(2) << "\n";
        std::cout << "checks " << report.checks.size() << ": ok " << report.count(Status::ok) << ", fail " << report.count(Status::fail)
                  << ", skipped " << report.count(Status::skipped) << " -> " << cfg.out << "\n";
        for (const auto& r : report.checks)
            if (r.verdict.status == Status::fail) {
                std::cout << "FAIL " << r.key;
                if (r.verdict.witness)
                    std::cout << " at basis " << r.verdict.witness->basis_index << " residual " << to_string(r.verdict.witness->residual)
                              << " (" << r.verdict.witness->detail << ")";
                if (!r.verdict.note.empty()) std::cout << " " << r.verdict.note;
                std::cout << "\n";
            }
        return report.exit_code();
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const GenericityError& e) {
        std::cerr << "genericity violation: " << e.what() << "\n";
        return 2;
    } catch (const RetryExhausted& e) {
        std::cerr << "parameter draws exhausted: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "invalid job: " << e.what() << "\n";
        return 2;
    }
}

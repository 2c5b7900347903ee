#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bco/audit.hpp"
#include "bco/error.hpp"
#include "bco/experiment.hpp"
#include "bco_suites/suites.hpp"

namespace {

// Exit codes: 0 success, 1 runtime or I/O failure, 2 bad configuration,
// 3 audit or selftest found violations.
constexpr int kRuntimeFailure = 1;
constexpr int kBadConfig = 2;
constexpr int kViolations = 3;

enum class Level { Quiet, Info, Debug };

Level log_level() {
    const char* env = std::getenv("BCO_LOG");
    if (env == nullptr || *env == '\0') {
        return Level::Quiet;
    }
    const std::string v(env);
    if (v == "debug") {
        return Level::Debug;
    }
    if (v == "info") {
        return Level::Info;
    }
    std::cerr << "bco: ignoring BCO_LOG=" << v << " (expected debug or info)\n";
    return Level::Quiet;
}

std::vector<std::uint64_t> parse_seeds(const std::string& list) {
    std::vector<std::uint64_t> out;
    std::stringstream in(list);
    std::string item;
    while (std::getline(in, item, ',')) {
        std::size_t used = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size() || item.front() == '-') {
            throw bco::SpecError("--seeds: '" + item + "' is not a non-negative integer");
        }
        out.push_back(v);
    }
    if (out.empty()) {
        throw bco::SpecError("--seeds: empty list");
    }
    return out;
}

int cmd_run(const std::string& config_path, const std::string& out_dir, const std::string& seeds,
            Level level) {
    bco::ExperimentConfig cfg;
    try {
        cfg = bco::load_experiment(config_path);
        if (!out_dir.empty()) {
            cfg.output_dir = out_dir;
        }
        if (!seeds.empty()) {
            cfg.seeds = parse_seeds(seeds);
        }
    } catch (const bco::SpecError& e) {
        std::cerr << "bco: invalid configuration: " << e.what() << '\n';
        return kBadConfig;
    }
    if (level == Level::Debug) {
        std::cerr << "config " << bco::config_hash(cfg) << ' ' << bco::canonical_json(cfg).dump()
                  << '\n'
                  << "learner " << bco::to_json(cfg.learner()).dump() << '\n';
    }
    const bco::LogFn log = level == Level::Quiet
                               ? bco::LogFn{}
                               : bco::LogFn([](const std::string& m) { std::cerr << m << '\n'; });
    const auto result = bco::run_experiment(cfg, log);
    if (level == Level::Debug) {
        for (const auto& s : result.seeds) {
            std::cerr << "seed " << s.seed << ": " << bco::to_json(s.regret).dump() << '\n';
        }
    }
    std::cout << cfg.output_dir << "/summary.json\n";
    if (result.failed) {
        for (const auto& s : result.seeds) {
            if (s.partial) {
                std::cerr << "bco: seed " << s.seed << " aborted: " << s.error << '\n';
            }
        }
        return kRuntimeFailure;
    }
    return 0;
}

int cmd_audit(const std::string& record_path, std::size_t samples, Level level) {
    std::ifstream in(record_path);
    if (!in) {
        std::cerr << "bco: cannot open " << record_path << '\n';
        return kRuntimeFailure;
    }
    const bco::GameRecord rec = bco::read_record(in);
    const bco::AuditReport report = bco::lemma_audit(rec, samples);
    std::cout << bco::to_json(report).dump(2) << '\n';
    if (level != Level::Quiet) {
        std::cerr << report.epochs.size() << " epochs, " << report.moves << " moves, "
                  << report.restarts << " restarts, " << report.violations.size()
                  << " violations\n";
    }
    return report.ok() ? 0 : kViolations;
}

int cmd_selftest(const std::string& suite) {
    std::vector<std::string> names;
    if (suite.empty()) {
        names = bco::suites::property_suite_names();
    } else {
        names.push_back(suite);
    }
    bool ok = true;
    for (const auto& n : names) {
        const auto report = bco::suites::run_property_suite(n);
        bco::suites::print_report(std::cout, report);
        ok = ok && bco::suites::report_ok(report);
    }
    return ok ? 0 : kViolations;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bandit convex optimization: experiment runner, auditor and self-test"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string seeds;
    auto* run = app.add_subcommand("run", "Play every seed of an experiment and write reports");
    run->add_option("--config", config_path, "Experiment JSON")->required()->check(CLI::ExistingFile);
    run->add_option("--out", out_dir, "Output directory (overrides output_dir)");
    run->add_option("--seeds", seeds, "Comma-separated seeds (overrides seeds)");

    std::string record_path;
    std::size_t samples = 100;
    auto* audit = app.add_subcommand("audit", "Check the per-epoch bounds of a recorded game");
    audit->add_option("--record", record_path, "record.jsonl written by run")
        ->required()
        ->check(CLI::ExistingFile);
    audit->add_option("--samples", samples, "Probe samples per region and epoch");

    std::string suite;
    auto* selftest = app.add_subcommand("selftest", "Run the property suites");
    selftest->add_option("--suite", suite, "One suite")
        ->check(CLI::IsMember(bco::suites::property_suite_names()));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kBadConfig;
    }

    const Level level = log_level();
    try {
        if (run->parsed()) {
            return cmd_run(config_path, out_dir, seeds, level);
        }
        if (audit->parsed()) {
            return cmd_audit(record_path, samples, level);
        }
        return cmd_selftest(suite);
    } catch (const bco::SpecError& e) {
        std::cerr << "bco: invalid input: " << e.what() << '\n';
        return kBadConfig;
    } catch (const std::exception& e) {
        std::cerr << "bco: " << e.what() << '\n';
        return kRuntimeFailure;
    }
}

// signac-bench - corpus generation, timing of the six operation
// categories, and scaling assertions over the resulting reports.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "signac/bench.hpp"
#include "signac/errors.hpp"

namespace fs = std::filesystem;
using namespace signac::bench;

namespace {

int cmd_run(BenchmarkConfig config, const std::string& root, const std::string& output) {
    const fs::path corpora_root(root);
    for (const std::size_t n : config.sizes) {
        const fs::path dir = corpus_dir(corpora_root, n);
        if (fs::exists(dir / signac::kConfigFileName)) {
            continue;  // reuse; regenerate into a fresh --root when the seed changes
        }
        std::cerr << "generating corpus N=" << n << " under " << dir.string() << "\n";
        generate_corpus(config, n, dir);
    }
    std::cerr << "running benchmarks (repetitions=" << config.repetitions << ")\n";
    const BenchmarkReport report = run_benchmarks(config, corpora_root);
    const std::string text = report.to_json().dump(4) + "\n";
    if (output.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(output, std::ios::binary | std::ios::trunc);
        if (!out.is_open()) {
            std::cerr << "cannot write report to " << output << "\n";
            return 1;
        }
        out << text;
    }
    return 0;
}

int cmd_check(const std::string& report_file, const ScalingTolerances& tolerances) {
    std::ifstream in(report_file, std::ios::binary);
    if (!in.is_open()) {
        std::cerr << "cannot read report " << report_file << "\n";
        return 1;
    }
    const signac::Value doc = signac::Value::parse(in, nullptr, false);
    if (doc.is_discarded()) {
        std::cerr << "report is not valid JSON: " << report_file << "\n";
        return 2;
    }
    const BenchmarkReport report = BenchmarkReport::from_json(doc);
    const ScalingVerdict verdict = assert_scaling(report, tolerances);
    for (const auto& failure : verdict.failures) {
        std::cout << "FAIL " << failure << "\n";
    }
    std::cout << (verdict.pass ? "PASS" : "FAIL") << "\n";
    return verdict.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"signac-bench: timing of metadata operations against synthetic corpora"};
    app.require_subcommand(1);

    BenchmarkConfig config;
    std::string root = "signac_bench_corpora";
    std::string output;
    auto* run = app.add_subcommand("run", "generate corpora (if missing) and measure");
    run->add_option("--sizes", config.sizes, "corpus sizes, ascending")
        ->required()
        ->delimiter(',');
    run->add_option("--seed", config.seed, "corpus RNG seed");
    run->add_option("--reps", config.repetitions, "repetitions per category");
    run->add_option("--keys", config.keys_per_statepoint, "keys per state point");
    run->add_option("--value-length", config.value_length, "characters per value");
    run->add_option("--root", root, "directory holding the corpora");
    run->add_option("--output", output, "report file (default: stdout)");

    std::string report_file;
    ScalingTolerances tolerances;
    auto* check = app.add_subcommand("check", "assert complexity expectations over a report");
    check->add_option("report", report_file, "report JSON produced by 'run'")->required();
    check->add_option("--constant-tolerance", tolerances.constant_ratio,
                      "allowed growth for the constant-time category");
    check->add_option("--linear-tolerance", tolerances.linear_ratio,
                      "allowed per-item spread for linear categories");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        if (run->parsed()) return cmd_run(config, root, output);
        if (check->parsed()) return cmd_check(report_file, tolerances);
    } catch (const signac::Error& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
    return 2;
}

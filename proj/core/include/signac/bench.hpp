#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "signac/project.hpp"
#include "signac/value.hpp"

namespace signac::bench {

// Corpus and measurement parameters. The defaults reproduce roughly 1 kB
// of metadata per directory: one indexed integer key plus nine single-char
// keys with 100-character values.
struct BenchmarkConfig {
    std::vector<std::size_t> sizes;  // ascending directory counts
    int keys_per_statepoint = 10;
    int value_length = 100;
    int repetitions = 3;
    std::uint64_t seed = 0;
};

// Deterministic state point of job `index` in a corpus of `n` jobs: the
// "i" key carries the index (uniqueness), the remaining single-char keys
// carry seeded pseudo-random strings.
Value statepoint_for(const BenchmarkConfig& config, std::size_t n, std::size_t index);

// Materializes the corpus project under `target_dir` (which must not
// exist or must be empty). Byte-identical for a fixed (seed, n).
Project generate_corpus(const BenchmarkConfig& config, std::size_t n,
                        const std::filesystem::path& target_dir);

// The six measured operation categories.
enum class Category : int {
    select_by_id = 1,        // expected O(1)
    search_rich_filter = 2,  // all keys of one job; expected O(N)
    search_lean_filter = 3,  // one key; expected O(N)
    iterate_first = 4,       // first full metadata pass in a fresh session; O(N)
    iterate_repeated = 5,    // repeated pass in the same session; O(N)
    determine_size = 6,      // count the data space; O(N)
};

std::string_view category_label(Category category);

struct CategoryResult {
    int category = 0;
    std::string label;
    std::size_t n = 0;
    double min_seconds = 0;   // headline statistic (min over repetitions)
    double mean_seconds = 0;
    double divisor = 1;       // 1 for constant-time categories, N otherwise
    double normalized = 0;    // min_seconds / divisor
};

struct BenchmarkReport {
    BenchmarkConfig config;
    std::vector<CategoryResult> results;

    Value to_json() const;
    static BenchmarkReport from_json(const Value& v);
};

// Runs all six categories over every configured size. Corpora are
// expected at `corpora_root`/N<size> (see corpus_dir). Read-only: the
// corpus trees are never modified.
BenchmarkReport run_benchmarks(const BenchmarkConfig& config,
                               const std::filesystem::path& corpora_root);

std::filesystem::path corpus_dir(const std::filesystem::path& corpora_root, std::size_t n);

struct ScalingTolerances {
    double constant_ratio = 5.0;  // category 1 growth across smallest->largest N
    double linear_ratio = 3.0;    // categories 2-6 per-item spread across sizes
};

struct ScalingVerdict {
    bool pass = true;
    std::vector<std::string> failures;  // one line per violated expectation
};

// Checks the report against the expected complexity orders: category 1
// constant within `constant_ratio`, categories 2-6 linear (time/N stable
// within `linear_ratio`). Requires at least two sizes spanning a 10x
// range; anything less raises BenchError.
ScalingVerdict assert_scaling(const BenchmarkReport& report,
                              const ScalingTolerances& tolerances = {});

}  // namespace signac::bench

#include "signac/bench.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <numeric>
#include <random>

#include "signac/errors.hpp"
#include "signac/query.hpp"

namespace signac::bench {

namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// Single-char keys for the non-indexed slots; 'i' is taken by the index key.
std::string nth_key(int k) {
    static constexpr std::string_view alphabet = "abcdefghjklmnopqrstuvwxyz0123456789";
    if (k < static_cast<int>(alphabet.size())) {
        return std::string(1, alphabet[static_cast<std::size_t>(k)]);
    }
    // beyond 35 extra keys, fall back to two-char keys
    const int rest = k - static_cast<int>(alphabet.size());
    return "k" + std::to_string(rest);
}

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    std::uint64_t x = a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdULL;
    x ^= x >> 33;
    return x;
}

std::string random_value(std::uint64_t seed, int length) {
    static constexpr std::string_view charset = "abcdefghijklmnopqrstuvwxyz0123456789";
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, charset.size() - 1);
    std::string out;
    out.reserve(static_cast<std::size_t>(length));
    for (int i = 0; i < length; ++i) {
        out.push_back(charset[pick(rng)]);
    }
    return out;
}

struct Samples {
    std::vector<double> values;

    double min() const { return *std::min_element(values.begin(), values.end()); }
    double mean() const {
        return std::accumulate(values.begin(), values.end(), 0.0) /
               static_cast<double>(values.size());
    }
};

CategoryResult make_result(Category category, std::size_t n, const Samples& samples) {
    CategoryResult result;
    result.category = static_cast<int>(category);
    result.label = std::string(category_label(category));
    result.n = n;
    result.min_seconds = samples.min();
    result.mean_seconds = samples.mean();
    result.divisor = category == Category::select_by_id ? 1.0 : static_cast<double>(n);
    result.normalized = result.min_seconds / result.divisor;
    return result;
}

}  // namespace

std::string_view category_label(Category category) {
    switch (category) {
        case Category::select_by_id: return "select_by_id";
        case Category::search_rich_filter: return "search_rich_filter";
        case Category::search_lean_filter: return "search_lean_filter";
        case Category::iterate_first: return "iterate_first_session";
        case Category::iterate_repeated: return "iterate_repeated";
        case Category::determine_size: return "determine_size";
    }
    return "unknown";
}

Value statepoint_for(const BenchmarkConfig& config, std::size_t n, std::size_t index) {
    Value sp = Value::object();
    sp["i"] = static_cast<std::int64_t>(index);
    for (int k = 0; k + 1 < config.keys_per_statepoint; ++k) {
        const std::uint64_t stream =
            mix(mix(config.seed, n), mix(index, static_cast<std::uint64_t>(k)));
        sp[nth_key(k)] = random_value(stream, config.value_length);
    }
    return sp;
}

fs::path corpus_dir(const fs::path& corpora_root, std::size_t n) {
    return corpora_root / ("N" + std::to_string(n));
}

Project generate_corpus(const BenchmarkConfig& config, std::size_t n, const fs::path& target_dir) {
    if (fs::exists(target_dir) && !fs::is_empty(target_dir)) {
        throw BenchError("corpus target directory is not empty: " + target_dir.string());
    }
    std::error_code ec;
    fs::create_directories(target_dir, ec);
    if (ec) {
        throw BenchError("cannot create corpus directory " + target_dir.string() + ": " +
                         ec.message());
    }
    Project project = Project::init("benchmark-corpus", target_dir);
    for (std::size_t index = 0; index < n; ++index) {
        project.open_job(statepoint_for(config, n, index)).init();
    }
    return project;
}

BenchmarkReport run_benchmarks(const BenchmarkConfig& config, const fs::path& corpora_root) {
    if (config.sizes.empty()) {
        throw BenchError("no corpus sizes configured");
    }
    if (!std::is_sorted(config.sizes.begin(), config.sizes.end())) {
        throw BenchError("corpus sizes must be ascending");
    }
    const int reps = std::max(1, config.repetitions);

    BenchmarkReport report;
    report.config = config;

    for (const std::size_t n : config.sizes) {
        const fs::path dir = corpus_dir(corpora_root, n);
        if (!fs::exists(dir / kConfigFileName)) {
            throw BenchError("missing corpus for N=" + std::to_string(n) + " under " +
                             dir.string() + " (generate it first)");
        }
        if (n == 0) {
            throw BenchError("benchmark sizes must be positive");
        }

        const std::size_t known_index = n / 2;
        const Value known_sp = statepoint_for(config, n, known_index);
        const JobId known_id = compute_id(known_sp);

        // Rich filter: every key of one sampled job. Lean filter: one key.
        std::vector<FilterExpr> rich_clauses;
        for (auto it = known_sp.begin(); it != known_sp.end(); ++it) {
            rich_clauses.push_back(make_cmp(it.key(), CmpOp::eq, it.value()));
        }
        const FilterExpr rich_filter = make_and(std::move(rich_clauses));
        const FilterExpr lean_filter =
            make_cmp("i", CmpOp::eq, static_cast<std::int64_t>(known_index));

        Samples select, rich, lean, first_iter, repeat_iter, size;

        for (int rep = 0; rep < reps; ++rep) {
            {
                // category 1: selection by known id, O(1); a fresh handle per
                // open so the session cache cannot help
                constexpr int kInner = 3;
                double total = 0;
                for (int inner = 0; inner < kInner; ++inner) {
                    Project session = Project::open(dir);
                    const auto start = Clock::now();
                    const Job job = session.open_job_by_id(known_id);
                    total += seconds_since(start);
                    if (job.id() != known_id) throw BenchError("benchmark self-check failed");
                }
                select.values.push_back(total / kInner);
            }
            {
                // category 2: rich filter in a fresh session
                Project session = Project::open(dir);
                const auto start = Clock::now();
                const auto jobs = session.find_jobs(rich_filter);
                rich.values.push_back(seconds_since(start));
                if (jobs.size() != 1) throw BenchError("rich filter must select exactly one job");
            }
            {
                // category 3: lean filter in a fresh session
                Project session = Project::open(dir);
                const auto start = Clock::now();
                const auto jobs = session.find_jobs(lean_filter);
                lean.values.push_back(seconds_since(start));
                if (jobs.size() != 1) throw BenchError("lean filter must select exactly one job");
            }
            {
                // categories 4 + 5: first vs repeated full iteration within
                // one session (the first is measured once per session)
                Project session = Project::open(dir);
                const auto start_first = Clock::now();
                std::size_t seen = 0;
                for (const auto& job : session.all_jobs()) {
                    seen += job.statepoint().size();
                }
                first_iter.values.push_back(seconds_since(start_first));
                if (seen == 0 && n > 0) throw BenchError("iteration saw no metadata");

                constexpr int kInnerIters = 3;
                double total = 0;
                for (int inner = 0; inner < kInnerIters; ++inner) {
                    const auto start = Clock::now();
                    std::size_t again = 0;
                    for (const auto& job : session.all_jobs()) {
                        again += job.statepoint().size();
                    }
                    total += seconds_since(start);
                    if (again != seen) throw BenchError("repeated iteration diverged");
                }
                repeat_iter.values.push_back(total / kInnerIters);
            }
            {
                // category 6: determine the data space size in a fresh session
                Project session = Project::open(dir);
                const auto start = Clock::now();
                const std::size_t count = session.num_jobs();
                size.values.push_back(seconds_since(start));
                if (count != n) {
                    throw BenchError("corpus for N=" + std::to_string(n) + " holds " +
                                     std::to_string(count) + " jobs");
                }
            }
        }

        report.results.push_back(make_result(Category::select_by_id, n, select));
        report.results.push_back(make_result(Category::search_rich_filter, n, rich));
        report.results.push_back(make_result(Category::search_lean_filter, n, lean));
        report.results.push_back(make_result(Category::iterate_first, n, first_iter));
        report.results.push_back(make_result(Category::iterate_repeated, n, repeat_iter));
        report.results.push_back(make_result(Category::determine_size, n, size));
    }
    return report;
}

Value BenchmarkReport::to_json() const {
    Value sizes = Value::array();
    for (const auto n : config.sizes) sizes.push_back(n);
    Value results_json = Value::array();
    for (const auto& r : results) {
        results_json.push_back({
            {"category", r.category},
            {"label", r.label},
            {"n", r.n},
            {"min", r.min_seconds},
            {"mean", r.mean_seconds},
            {"divisor", r.divisor},
            {"normalized", r.normalized},
        });
    }
    return Value{
        {"config",
         {
             {"sizes", sizes},
             {"keys_per_statepoint", config.keys_per_statepoint},
             {"value_length", config.value_length},
             {"repetitions", config.repetitions},
             {"seed", config.seed},
         }},
        {"results", results_json},
    };
}

BenchmarkReport BenchmarkReport::from_json(const Value& v) {
    BenchmarkReport report;
    const Value& cfg = v.at("config");
    report.config.sizes = cfg.at("sizes").get<std::vector<std::size_t>>();
    report.config.keys_per_statepoint = cfg.at("keys_per_statepoint").get<int>();
    report.config.value_length = cfg.at("value_length").get<int>();
    report.config.repetitions = cfg.at("repetitions").get<int>();
    report.config.seed = cfg.at("seed").get<std::uint64_t>();
    for (const auto& r : v.at("results")) {
        CategoryResult result;
        result.category = r.at("category").get<int>();
        result.label = r.at("label").get<std::string>();
        result.n = r.at("n").get<std::size_t>();
        result.min_seconds = r.at("min").get<double>();
        result.mean_seconds = r.at("mean").get<double>();
        result.divisor = r.at("divisor").get<double>();
        result.normalized = r.at("normalized").get<double>();
        report.results.push_back(std::move(result));
    }
    return report;
}

ScalingVerdict assert_scaling(const BenchmarkReport& report, const ScalingTolerances& tolerances) {
    std::vector<std::size_t> sizes;
    for (const auto& r : report.results) {
        if (std::find(sizes.begin(), sizes.end(), r.n) == sizes.end()) sizes.push_back(r.n);
    }
    std::sort(sizes.begin(), sizes.end());
    if (sizes.size() < 2 || sizes.front() == 0 ||
        static_cast<double>(sizes.back()) / static_cast<double>(sizes.front()) < 10.0) {
        throw BenchError("scaling assertion needs at least two sizes spanning a 10x range");
    }

    const auto find_result = [&](int category, std::size_t n) -> const CategoryResult* {
        for (const auto& r : report.results) {
            if (r.category == category && r.n == n) return &r;
        }
        return nullptr;
    };

    ScalingVerdict verdict;
    for (int category = 1; category <= 6; ++category) {
        std::vector<const CategoryResult*> series;
        for (const auto n : sizes) {
            const CategoryResult* r = find_result(category, n);
            if (r == nullptr) {
                verdict.pass = false;
                verdict.failures.push_back("category " + std::to_string(category) +
                                           ": missing measurement for N=" + std::to_string(n));
            } else {
                series.push_back(r);
            }
        }
        if (series.size() < 2) continue;

        if (category == static_cast<int>(Category::select_by_id)) {
            const double smallest = series.front()->min_seconds;
            const double largest = series.back()->min_seconds;
            const double ratio = smallest > 0 ? largest / smallest : 1.0;
            if (ratio > tolerances.constant_ratio) {
                verdict.pass = false;
                verdict.failures.push_back(
                    "category 1 (" + std::string(category_label(Category::select_by_id)) +
                    "): expected constant time, grew " + std::to_string(ratio) + "x from N=" +
                    std::to_string(series.front()->n) + " to N=" + std::to_string(series.back()->n) +
                    " (tolerance " + std::to_string(tolerances.constant_ratio) + "x)");
            }
        } else {
            double lo = std::numeric_limits<double>::infinity();
            double hi = 0;
            for (const CategoryResult* r : series) {
                const double per_item = r->min_seconds / static_cast<double>(r->n);
                lo = std::min(lo, per_item);
                hi = std::max(hi, per_item);
            }
            const double ratio = lo > 0 ? hi / lo : 1.0;
            if (ratio > tolerances.linear_ratio) {
                verdict.pass = false;
                verdict.failures.push_back(
                    "category " + std::to_string(category) + " (" + series.front()->label +
                    "): expected linear time, per-item spread " + std::to_string(ratio) +
                    "x across sizes (tolerance " + std::to_string(tolerances.linear_ratio) + "x)");
            }
        }
    }
    return verdict;
}

}  // namespace signac::bench

#include <benchmark/benchmark.h>

#include <filesystem>

#include "signac/bench.hpp"
#include "signac/project.hpp"
#include "signac/query.hpp"

using namespace signac;
namespace fs = std::filesystem;

namespace {

// One shared on-disk corpus for the whole benchmark run.
class CorpusFixture {
public:
    static const CorpusFixture& instance() {
        static CorpusFixture fixture;
        return fixture;
    }

    const fs::path& root() const { return root_; }
    const JobId& known_id() const { return known_id_; }
    static constexpr std::size_t kJobs = 1000;

private:
    CorpusFixture() {
        root_ = fs::temp_directory_path() /
                ("signac-bm-" + std::to_string(::getpid()));
        fs::remove_all(root_);
        bench::BenchmarkConfig config;
        config.seed = 4;
        bench::generate_corpus(config, kJobs, root_);
        known_id_ = compute_id(bench::statepoint_for(config, kJobs, kJobs / 2));
    }
    ~CorpusFixture() {
        std::error_code ec;
        fs::remove_all(root_, ec);
    }

    fs::path root_;
    JobId known_id_;
};

}  // namespace

static void BM_OpenJobById(benchmark::State& state) {
    const auto& fixture = CorpusFixture::instance();
    for (auto _ : state) {
        Project session = Project::open(fixture.root());
        benchmark::DoNotOptimize(session.open_job_by_id(fixture.known_id()));
    }
}
BENCHMARK(BM_OpenJobById);

static void BM_FirstIteration(benchmark::State& state) {
    const auto& fixture = CorpusFixture::instance();
    for (auto _ : state) {
        Project session = Project::open(fixture.root());
        benchmark::DoNotOptimize(session.all_jobs());
    }
}
BENCHMARK(BM_FirstIteration)->Unit(benchmark::kMillisecond);

static void BM_CachedIteration(benchmark::State& state) {
    const auto& fixture = CorpusFixture::instance();
    Project session = Project::open(fixture.root());
    benchmark::DoNotOptimize(session.all_jobs());  // warm the session cache
    for (auto _ : state) {
        benchmark::DoNotOptimize(session.all_jobs());
    }
}
BENCHMARK(BM_CachedIteration)->Unit(benchmark::kMillisecond);

static void BM_FindLeanFilter(benchmark::State& state) {
    const auto& fixture = CorpusFixture::instance();
    Project session = Project::open(fixture.root());
    const auto filter = parse_filter(Value::parse(R"({"i": 500})"));
    benchmark::DoNotOptimize(session.all_jobs());
    for (auto _ : state) {
        benchmark::DoNotOptimize(session.find_jobs(filter));
    }
}
BENCHMARK(BM_FindLeanFilter)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

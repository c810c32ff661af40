#include <benchmark/benchmark.h>

#include "signac/query.hpp"

using namespace signac;

static void BM_ParseFilter(benchmark::State& state) {
    const Value doc = Value::parse(R"({"$or": [{"p": 0.1}, {"p.$gte": 10, "kT.$lt": 2.0}]})");
    for (auto _ : state) {
        benchmark::DoNotOptimize(parse_filter(doc));
    }
}
BENCHMARK(BM_ParseFilter);

static void BM_Matches(benchmark::State& state) {
    const FilterExpr filter =
        parse_filter(Value::parse(R"({"p.$gt": 1.0, "N": 1000, "tag.$exists": false})"));
    const Value doc = Value::parse(R"({"N": 1000, "kT": 1.0, "p": 10.0, "deep": {"x": 1}})");
    for (auto _ : state) {
        benchmark::DoNotOptimize(matches(filter, doc));
    }
}
BENCHMARK(BM_Matches);

static void BM_LookupPath(benchmark::State& state) {
    const Value doc = Value::parse(R"({"a": {"b": {"c": {"d": 4}}}})");
    for (auto _ : state) {
        benchmark::DoNotOptimize(lookup_path(doc, "a.b.c.d"));
    }
}
BENCHMARK(BM_LookupPath);

BENCHMARK_MAIN();

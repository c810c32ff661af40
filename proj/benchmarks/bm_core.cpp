#include <benchmark/benchmark.h>

#include "signac/canonical.hpp"
#include "signac/statepoint.hpp"

using namespace signac;

namespace {

Value ideal_gas_statepoint() {
    return Value::parse(R"({"N": 1000, "kT": 1.0, "p": 0.1, "seed": 42})");
}

Value nested_statepoint(int width, int depth) {
    Value v = Value::object();
    for (int i = 0; i < width; ++i) {
        const std::string key = "k" + std::to_string(i);
        if (depth > 0) {
            v[key] = nested_statepoint(width, depth - 1);
        } else {
            v[key] = 0.5 * i;
        }
    }
    return v;
}

}  // namespace

static void BM_CanonicalizeFlat(benchmark::State& state) {
    const Value sp = ideal_gas_statepoint();
    for (auto _ : state) {
        benchmark::DoNotOptimize(canonicalize(sp));
    }
}
BENCHMARK(BM_CanonicalizeFlat);

static void BM_CanonicalizeNested(benchmark::State& state) {
    const Value sp = nested_statepoint(4, static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(canonicalize(sp));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CanonicalizeNested)->DenseRange(1, 4);

static void BM_ComputeId(benchmark::State& state) {
    const Value sp = ideal_gas_statepoint();
    for (auto _ : state) {
        benchmark::DoNotOptimize(compute_id(sp));
    }
}
BENCHMARK(BM_ComputeId);

static void BM_CanonicalFloatText(benchmark::State& state) {
    double x = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(canonical_float_text(x));
        x += 0.1;
    }
}
BENCHMARK(BM_CanonicalFloatText);

BENCHMARK_MAIN();

// Serial reference search against the OpenMP branch-parallel search.

#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>

#include "ontokit/finder.hpp"
#include "ontokit/frontend.hpp"

using namespace ontokit;

namespace {

Model load(const std::string& name) {
    std::ifstream in(std::string(ONTOKIT_FIXTURES) + "/" + name);
    std::stringstream s;
    s << in.rdbuf();
    auto r = parse_text(s.str());
    if (!r.ok()) throw std::runtime_error("cannot parse " + name);
    return *r.model;
}

Scope event_scope(int persons) {
    Scope s;
    s.perClassifier = {{"Person", persons}, {"Organization", 2}, {"Treatment", 3}};
    s.worldLimit = 100;
    return s;
}

void BM_EnumerateEvent(benchmark::State& state, bool parallel) {
    auto model = load("healthcare_event.onto");
    auto scope = event_scope(static_cast<int>(state.range(0)));
    FinderOptions options;
    options.parallel = parallel;
    std::size_t total = 0;
    for (auto _ : state) {
        auto e = enumerate(model, scope, options);
        total = e.total;
        benchmark::DoNotOptimize(e.worlds.data());
    }
    state.counters["worlds"] = static_cast<double>(total);
}

void BM_Metaproperties(benchmark::State& state, bool parallel) {
    auto model = load("severity.onto");
    Scope scope;
    scope.perClassifier = {{"Person", static_cast<int>(state.range(0))}, {"PathologicalCondition", 6}};
    scope.qualityValues["Severity"] = {"0", "1", "2"};
    FinderOptions options;
    options.parallel = parallel;
    for (auto _ : state) benchmark::DoNotOptimize(check_metaproperties(model, "moreSevereThan", scope, options));
}

} // namespace

BENCHMARK_CAPTURE(BM_EnumerateEvent, serial, false)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_EnumerateEvent, parallel, true)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Metaproperties, serial, false)->DenseRange(2, 3)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Metaproperties, parallel, true)->DenseRange(2, 3)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

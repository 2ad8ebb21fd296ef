#include <benchmark/benchmark.h>

#include <random>

#include "hnamc/parsers.hpp"
#include "hnamc/slicing.hpp"

using namespace hnamc;

namespace {

// Layered structure: each layer mixes silent edges with labeled edges into the next
// layer, and the last layer loops back to the first.
PointedLabeledKripke layered(std::size_t layers, std::size_t width, unsigned seed) {
  std::mt19937_64 rng(seed);
  const VarSet vars({"x", "y", "z"});
  Kripke k(vars, Domain({"0", "1"}));
  for (std::size_t l = 0; l < layers; ++l)
    for (std::size_t i = 0; i < width; ++i)
      k.add_world("w" + std::to_string(l) + "_" + std::to_string(i),
                  {Value(rng() % 2), Value(rng() % 2), Value(rng() % 2)});
  PointedLabeledKripke p{k, {}, 0};
  p.labeling.actions = {"a", "b", "c"};
  auto id = [&](std::size_t l, std::size_t i) { return WorldId(l * width + i); };
  auto edge = [&](WorldId u, WorldId v, ActionId a) {
    if (!p.k.has_edge(u, v)) p.k.add_edge(u, v);
    auto& lbl = p.labeling.labels[{u, v}];
    if (std::find(lbl.begin(), lbl.end(), a) == lbl.end()) lbl.push_back(a);
    std::sort(lbl.begin(), lbl.end());
  };
  for (std::size_t l = 0; l < layers; ++l)
    for (std::size_t i = 0; i < width; ++i) {
      if (i + 1 < width) edge(id(l, i), id(l, i + 1), kEpsilon);
      edge(id(l, i), id((l + 1) % layers, rng() % width), ActionId(rng() % 3));
      if (rng() % 2) edge(id(l, i), id(l, rng() % width), kEpsilon);
    }
  return p;
}

Hna od_hna() {
  return parse_hna(
      "actions a b c\n"
      "node n0 init \"forall p. forall q. x(p) <~ x(q) | x(q) <~ x(p)\"\n"
      "node n1 \"forall p. exists q. z(p) <~ z(q) & !y(q) <~ x(p)\"\n"
      "edge n0 n1 : a\nedge n0 n0 : b c\nedge n1 n0 : a b\nedge n1 n1 : c\n");
}

void run(benchmark::State& state, ExecutionPolicy policy) {
  const auto k = layered(std::size_t(state.range(0)), 4, 7);
  const Hna h = od_hna();
  ModelCheckOptions opts;
  opts.policy = policy;
  for (auto _ : state) benchmark::DoNotOptimize(model_check(h, k, opts));
}

void BM_ModelCheckSerial(benchmark::State& state) { run(state, ExecutionPolicy::Serial); }
void BM_ModelCheckParallel(benchmark::State& state) { run(state, ExecutionPolicy::Parallel); }

}  // namespace

BENCHMARK(BM_ModelCheckSerial)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ModelCheckParallel)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

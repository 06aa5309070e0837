#include <benchmark/benchmark.h>

#include "roembed/extractor.hpp"
#include "roembed/formula.hpp"
#include "roembed/generator.hpp"
#include "roembed/oracle.hpp"
#include "roembed/two_party.hpp"

using namespace roembed;

namespace {

std::string random_formula(std::size_t n, std::uint64_t seed, double neg = 0.3) {
  GenSpec spec;
  spec.n_leaves = n;
  spec.negation_prob = neg;
  spec.seed = seed;
  return generate_formula(spec);
}

void BM_Canonicalize(benchmark::State& state) {
  const Formula f = parse(random_formula(static_cast<std::size_t>(state.range(0)), 7));
  for (auto _ : state) benchmark::DoNotOptimize(canonicalize(f));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Canonicalize)->RangeMultiplier(4)->Range(16, 4096)->Complexity();

void BM_Extract(benchmark::State& state) {
  GenSpec spec;
  spec.n_leaves = static_cast<std::size_t>(state.range(0));
  spec.leaf_parent = GateKind::And;
  spec.seed = 11;
  const GadgetTree g = gadget_expand(generate_tree(spec), Gadget::Or);
  ExtractOptions opts;
  opts.verify_limit = 0;  // structural check only; enumeration is measured below
  for (auto _ : state) benchmark::DoNotOptimize(extract(g, opts));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Extract)->RangeMultiplier(4)->Range(16, 512)->Complexity();

void BM_VerifyExhaustive(benchmark::State& state) {
  const std::size_t r = static_cast<std::size_t>(state.range(0));
  std::string text = "z1";
  for (std::size_t i = 2; i <= r; ++i) text += " & z" + std::to_string(i);
  const GadgetTree g = gadget_expand(canonicalize(parse(text)), Gadget::Or);
  const ExtractionResult res = extract(g);
  for (auto _ : state) benchmark::DoNotOptimize(verify_embedding(*res.cert0, g, r, false));
}
BENCHMARK(BM_VerifyExhaustive)->DenseRange(4, 12, 2)->Unit(benchmark::kMillisecond);

void BM_LogRank(benchmark::State& state) {
  const CanonicalTree t = canonicalize(parse(random_formula(static_cast<std::size_t>(state.range(0)), 3, 0.0)));
  const GadgetTree g = gadget_expand(t, Gadget::Or);
  for (auto _ : state) benchmark::DoNotOptimize(log_rank(g));
}
BENCHMARK(BM_LogRank)->DenseRange(4, 10, 2)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();

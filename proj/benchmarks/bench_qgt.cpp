#include "qgt/bicrossed.hpp"
#include "qgt/classifier.hpp"
#include "qgt/haar.hpp"
#include "qgt/matched_pair.hpp"

#include <benchmark/benchmark.h>

using namespace qgt;

namespace {

void BM_CornerList(benchmark::State& state) {
  const auto p = static_cast<std::uint64_t>(state.range(0));
  const auto K = CompactOpenSet::parse("one_plus_p", p);
  const auto L = CompactOpenSet::parse("translate(units, -1)", p);
  for (auto _ : state) benchmark::DoNotOptimize(corner_list(K, L, MeasureKind::Mu, MeasureKind::Nu));
}
BENCHMARK(BM_CornerList)->Arg(3)->Arg(11)->Arg(101);

void BM_DecideInversePrimeSum(benchmark::State& state) {
  const PrimeSeries s{{SeriesAtom::power(1, 1)}, PrimeSubset::growth(2)};
  for (auto _ : state) benchmark::DoNotOptimize(decide(s));
}
BENCHMARK(BM_DecideInversePrimeSum);

void BM_ClassifyExplicitPrimes(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<std::uint64_t> primes = PrimeSubset::all_primes().first(n);
  ITPFISpec spec;
  spec.subset = PrimeSubset::all_primes().with_explicit(primes);
  spec.rule = ListRule::units_corner();
  spec.truncation = {n, 64};
  for (auto _ : state) benchmark::DoNotOptimize(classify(spec));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ClassifyExplicitPrimes)->Arg(1000)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond)->Complexity();

void BM_ClassifyPair(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(classify_pair(PrimeSubset::all_primes()));
}
BENCHMARK(BM_ClassifyPair)->Unit(benchmark::kMillisecond);

void BM_MatchedPairSamples(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(verify_samples(3, 100, 1));
}
BENCHMARK(BM_MatchedPairSamples)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

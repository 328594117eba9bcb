#include <benchmark/benchmark.h>

#include "fspace/kernels.hpp"
#include "fspace/witnesses.hpp"

using namespace fspace;

namespace {

// A 7-level tree splitting every class mod 2^l in two at level l.
SchemeTree deep_tree() {
  std::vector<ChainLink> chain{{BasicBox::full(), {}}};
  for (Nat level = 1; level <= 6; ++level) {
    const Nat m = Nat{1} << level;
    std::vector<SubbasicBox> extra;
    for (Nat r = 0; r < m; ++r) extra.push_back({PeriodicSet::residue(r, m), PeriodicSet::residue(r, m)});
    auto r = refine(chain.back().box, extra);
    chain.push_back({r.box, r.cert});
  }
  return chain_to_tree(chain);
}

std::vector<BasicBox> disjuncts(const ParityApparatus& app, std::size_t bound, std::size_t parity) {
  std::vector<BasicBox> out;
  for (std::size_t n = parity; n < bound; n += 2) {
    for (std::size_t m = parity; m < bound; m += 2) {
      if (n != m) out.push_back(normalize(disjunct(app, n, m)));
    }
  }
  return out;
}

void BM_verify_star_serial(benchmark::State& st) {
  const auto t = deep_tree();
  auto phi = build_injection(t);
  const auto p = phi.extend(t, st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(kernels::verify_star_serial(t, p, st.range(0)));
}
void BM_verify_star_parallel(benchmark::State& st) {
  const auto t = deep_tree();
  auto phi = build_injection(t);
  const auto p = phi.extend(t, st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(kernels::verify_star_parallel(t, p, st.range(0)));
}

void BM_parity_pairs_serial(benchmark::State& st) {
  const auto app = ParityApparatus::residues(64);
  const auto even = disjuncts(app, st.range(0), 0), odd = disjuncts(app, st.range(0), 1);
  for (auto _ : st) benchmark::DoNotOptimize(kernels::first_nonempty_pair_serial(even, odd, false));
}
void BM_parity_pairs_parallel(benchmark::State& st) {
  const auto app = ParityApparatus::residues(64);
  const auto even = disjuncts(app, st.range(0), 0), odd = disjuncts(app, st.range(0), 1);
  for (auto _ : st) benchmark::DoNotOptimize(kernels::first_nonempty_pair_parallel(even, odd, false));
}

void BM_disjointification_serial(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(kernels::disjointification_serial(st.range(0)));
}
void BM_disjointification_parallel(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(kernels::disjointification_parallel(st.range(0)));
}

}  // namespace

BENCHMARK(BM_verify_star_serial)->Arg(512)->Arg(4096);
BENCHMARK(BM_verify_star_parallel)->Arg(512)->Arg(4096);
BENCHMARK(BM_parity_pairs_serial)->Arg(8)->Arg(16);
BENCHMARK(BM_parity_pairs_parallel)->Arg(8)->Arg(16);
BENCHMARK(BM_disjointification_serial)->Arg(3)->Arg(4);
BENCHMARK(BM_disjointification_parallel)->Arg(3)->Arg(4);

BENCHMARK_MAIN();

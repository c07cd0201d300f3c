#include <benchmark/benchmark.h>

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "aqs/chained_cipher.hpp"
#include "aqs/forgery.hpp"
#include "aqs/protocol.hpp"
#include "aqs/state_vector.hpp"

namespace {

aqs::StateVector random_product(int n, aqs::Rng& rng) {
    std::vector<aqs::QubitState> qubits;
    qubits.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        qubits.push_back(aqs::haar_qubit(rng));
    }
    return aqs::from_product(qubits);
}

void BM_Encrypt(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    aqs::Rng rng(1);
    const aqs::PermutationKey key = aqs::PermutationKey::random(n, rng);
    const aqs::StateVector input = random_product(n, rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(aqs::encrypt(input, key));
    }
}
BENCHMARK(BM_Encrypt)->DenseRange(4, 16, 4);

void BM_BellMeasure(benchmark::State& state) {
    const int qubits = static_cast<int>(state.range(0));
    aqs::Rng rng(2);
    const aqs::StateVector input = random_product(qubits, rng);
    for (auto _ : state) {
        auto [outcome, collapsed] = aqs::bell_measure(input, 1, 2, rng);
        benchmark::DoNotOptimize(outcome);
        benchmark::DoNotOptimize(collapsed);
    }
}
BENCHMARK(BM_BellMeasure)->Arg(8)->Arg(12)->Arg(16)->Arg(18);

void BM_SwapTestCompare(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    aqs::Rng rng(3);
    const aqs::StateVector a = random_product(n, rng);
    const aqs::StateVector b = a;
    for (auto _ : state) {
        benchmark::DoNotOptimize(aqs::swap_test_compare(a, b, 20, rng));
    }
}
BENCHMARK(BM_SwapTestCompare)->Arg(2)->Arg(6)->Arg(10);

void BM_SchmidtFactorProduct(benchmark::State& state) {
    const int half = static_cast<int>(state.range(0));
    aqs::Rng rng(4);
    const aqs::StateVector input = random_product(2 * half, rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(aqs::schmidt_factor(input, half));
    }
}
BENCHMARK(BM_SchmidtFactorProduct)->Arg(4)->Arg(8);

void BM_SchmidtFactorEntangled(benchmark::State& state) {
    const int half = static_cast<int>(state.range(0));
    // A Bell pair straddling the cut keeps the Schmidt rank above 1, forcing
    // the SVD path and a nullopt result.
    aqs::StateVector input(2 * half);
    input.h(1);
    input.cnot(1, half + 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(aqs::schmidt_factor(input, half));
    }
}
BENCHMARK(BM_SchmidtFactorEntangled)->Arg(4)->Arg(8);

void BM_HonestRun(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const aqs::Comparator cmp{aqs::ComparatorMode::Exact, 20};
    std::uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(aqs::run_honest(n, std::nullopt, cmp, ++seed));
    }
}
BENCHMARK(BM_HonestRun)->DenseRange(1, 6, 1)->Unit(benchmark::kMillisecond);

void BM_ForgedArbitration(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const aqs::Comparator cmp{aqs::ComparatorMode::Exact, 20};
    aqs::Rng rng(5);
    const aqs::PartyKeys keys = aqs::PartyKeys::random(n, rng);
    const aqs::ForgedClaim claim = aqs::eve_forge(n, rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            aqs::trent_arbitrate(claim.s_e, claim.k_r, claim.p_e, keys, cmp, rng));
    }
}
BENCHMARK(BM_ForgedArbitration)->Arg(4)->Arg(8)->Arg(12);

}  // namespace

BENCHMARK_MAIN();

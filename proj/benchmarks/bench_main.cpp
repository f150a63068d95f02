// Microbenchmarks for the hot paths: the physical-exchange sampler, the big
// modular arithmetic behind key expansion, and the bulk bit operations.

#include <benchmark/benchmark.h>

#include "hkd/amplify.hpp"
#include "hkd/bigint.hpp"
#include "hkd/dhm.hpp"
#include "hkd/kljn.hpp"
#include "hkd/otp.hpp"
#include "hkd/rng.hpp"

namespace {

void BM_kljn_period(benchmark::State& state) {
    hkd::KljnConfig cfg;
    cfg.periods = 16;
    cfg.samples_per_period = static_cast<size_t>(state.range(0));
    cfg.seed = 42;
    for (auto _ : state) {
        auto result = hkd::run_exchange(cfg);
        benchmark::DoNotOptimize(result.alice_key);
    }
    state.SetItemsProcessed(int64_t(state.iterations()) * 16 * state.range(0));
}
BENCHMARK(BM_kljn_period)->Arg(1000)->Arg(10000);

void BM_modexp(benchmark::State& state) {
    const unsigned bits = static_cast<unsigned>(state.range(0));
    hkd::Rng rng(7);
    hkd::BigInt p = hkd::generate_safe_prime(bits, 16, rng);
    hkd::BigInt g = hkd::select_generator(p, rng);
    hkd::BigInt e = hkd::uniform_bigint(2, p - 2, rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(hkd::modexp(g, e, p));
        e += 1;  // vary the exponent so nothing is cached away
    }
}
BENCHMARK(BM_modexp)->Arg(64)->Arg(256)->Arg(512);

void BM_safe_prime(benchmark::State& state) {
    const unsigned bits = static_cast<unsigned>(state.range(0));
    uint64_t seed = 1;
    for (auto _ : state) {
        hkd::Rng rng(seed++);
        benchmark::DoNotOptimize(hkd::generate_safe_prime(bits, 24, rng));
    }
}
BENCHMARK(BM_safe_prime)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_otp_apply(benchmark::State& state) {
    const size_t bits = static_cast<size_t>(state.range(0));
    hkd::Rng rng(3);
    hkd::BitString data = rng.next_bits(bits);
    hkd::BitString pad = rng.next_bits(bits);
    for (auto _ : state) {
        benchmark::DoNotOptimize(hkd::otp_apply(data, pad));
    }
    state.SetItemsProcessed(int64_t(state.iterations()) * int64_t(bits));
}
BENCHMARK(BM_otp_apply)->Arg(1 << 10)->Arg(1 << 16)->Arg(1 << 19);

void BM_xor_amplify(benchmark::State& state) {
    hkd::Rng rng(5);
    hkd::BitString key = rng.next_bits(static_cast<size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(hkd::xor_amplify(key, 1));
    }
    state.SetItemsProcessed(int64_t(state.iterations()) * state.range(0));
}
BENCHMARK(BM_xor_amplify)->Arg(1 << 12)->Arg(1 << 18);

void BM_expand_round(benchmark::State& state) {
    const unsigned bits = static_cast<unsigned>(state.range(0));
    hkd::DhmParams params;
    params.prime_bits = bits;
    params.k_bits = bits / 2;
    params.rounds = 1;
    params.prime_gen_rounds = 24;
    uint64_t seed = 11;
    for (auto _ : state) {
        hkd::Rng mrng(seed++);
        hkd::BitString material = mrng.next_bits(hkd::per_round_pool_cost(params) * 3);
        hkd::KeyPool a(material, "test-injected");
        hkd::KeyPool b(material, "test-injected");
        auto run = hkd::expand_key_lockstep(a, b, params, seed * 2, seed * 2 + 1);
        benchmark::DoNotOptimize(run.alice.key.material);
    }
}
BENCHMARK(BM_expand_round)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

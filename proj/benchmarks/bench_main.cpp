#include <random>

#include <benchmark/benchmark.h>

#include "mdsat/encoder.hpp"
#include "mdsat/propagation.hpp"
#include "mdsat/relaxation.hpp"

using namespace mdsat;

namespace {

MessageBlock random_block(std::mt19937_64& rng) {
    MessageBlock b;
    for (auto& w : b.words) w = static_cast<std::uint32_t>(rng());
    return b;
}

const TemplateCnf& gated_instance() {
    static TemplateCnf inst = [] {
        TemplateCnf t = encode_template(39);
        install_constraint_family(t, 0);
        return substitute_hash(t, Digest{});
    }();
    return inst;
}

} // namespace

static void BM_Md4k(benchmark::State& state) {
    std::mt19937_64 rng(1);
    MessageBlock b = random_block(rng);
    int k = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(md4_k(b, k));
        b.words[0] ^= 1u;
    }
}
BENCHMARK(BM_Md4k)->Arg(39)->Arg(48);

static void BM_EncodeTemplate(benchmark::State& state) {
    int k = static_cast<int>(state.range(0));
    for (auto _ : state) {
        TemplateCnf t = encode_template(k);
        benchmark::DoNotOptimize(t.cnf.clauses.size());
    }
}
BENCHMARK(BM_EncodeTemplate)->Arg(39)->Arg(48)->Unit(benchmark::kMillisecond);

static void BM_InputClosure(benchmark::State& state) {
    TemplateCnf t = encode_template(39);
    UnitPropagator prop(t.cnf);
    std::mt19937_64 rng(2);
    for (auto _ : state) {
        MessageBlock b = random_block(rng);
        std::vector<Lit> a;
        a.reserve(512);
        for (int pos = 0; pos < 512; ++pos)
            a.push_back(b.bit(pos) ? t.vars.input_vars[pos]
                                    : -t.vars.input_vars[pos]);
        PropagationResult r = prop.closure(a);
        benchmark::DoNotOptimize(r.forced.size());
    }
}
BENCHMARK(BM_InputClosure)->Unit(benchmark::kMillisecond);

static void BM_Mu(benchmark::State& state) {
    const TemplateCnf& inst = gated_instance();
    UnitPropagator prop(inst.cnf);
    SwitchVector lambda =
        SwitchVector::parse("0000000011101110111011100000000", 31);
    for (auto _ : state) {
        MuResult r = compute_mu(prop, inst.vars, lambda);
        benchmark::DoNotOptimize(r.mu);
    }
}
BENCHMARK(BM_Mu)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

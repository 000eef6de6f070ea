#include <benchmark/benchmark.h>

#include "bccsp/sweeps.hpp"

using namespace bccsp;

namespace {

const Alphabet& ab() {
    static const Alphabet a = Alphabet::interleaving({"a", "b"});
    return a;
}

const std::vector<std::string>& systems() {
    static const std::vector<std::string> s = {"E_RS", "E_CS", "E_S", "E_RT", "E_FT", "E_R", "E_F", "E_CT", "E_T"};
    return s;
}

void BM_SpectrumSerial(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(spectrum_sweep_serial(ab(), static_cast<std::uint32_t>(st.range(0))));
}

void BM_SpectrumParallel(benchmark::State& st) {
    for (auto _ : st)
        benchmark::DoNotOptimize(spectrum_sweep_parallel(ab(), static_cast<std::uint32_t>(st.range(0))));
}

void BM_EliminationSerial(benchmark::State& st) {
    for (auto _ : st)
        benchmark::DoNotOptimize(elimination_sweep_serial(systems(), ab(), TransitionMode::Interleaving,
                                                          static_cast<std::uint32_t>(st.range(0)), 100));
}

void BM_EliminationParallel(benchmark::State& st) {
    for (auto _ : st)
        benchmark::DoNotOptimize(elimination_sweep_parallel(systems(), ab(), TransitionMode::Interleaving,
                                                            static_cast<std::uint32_t>(st.range(0)), 100));
}

void BM_SoundnessSerial(benchmark::State& st) {
    for (auto _ : st)
        benchmark::DoNotOptimize(soundness_sweep_serial({"E_CT", "E_T"}, ab(), TransitionMode::Interleaving, 1));
}

void BM_SoundnessParallel(benchmark::State& st) {
    for (auto _ : st)
        benchmark::DoNotOptimize(soundness_sweep_parallel({"E_CT", "E_T"}, ab(), TransitionMode::Interleaving, 1));
}

}  // namespace

BENCHMARK(BM_SpectrumSerial)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SpectrumParallel)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EliminationSerial)->Arg(6)->Arg(7)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EliminationParallel)->Arg(6)->Arg(7)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SoundnessSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SoundnessParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

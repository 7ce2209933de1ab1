#include <benchmark/benchmark.h>

#include "hca/evalsuite.hpp"

using namespace hca;

namespace {

const ValidatedKey& bench_key() {
  static const auto key = [] {
    auto rng = make_rng(42);
    return random_valid_key(rng);
  }();
  return key;
}

std::vector<std::uint8_t> bench_data(std::size_t bytes) {
  auto rng = make_rng(43);
  std::vector<std::uint8_t> v(bytes);
  for (auto& b : v) b = static_cast<std::uint8_t>(rng());
  return v;
}

template <void (*Process)(const BlockCipher&, std::span<std::uint8_t>)>
void BM_Blocks(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const BlockCipher cipher(bench_key(), CipherParams::for_block(n));
  auto data = bench_data(256 * n / 8);
  for (auto _ : state) {
    Process(cipher, data);
    benchmark::DoNotOptimize(data.data());
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * data.size()));
}

void BM_ReferenceBlock(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto rng = make_rng(44);
  auto p = random_lattice(rng, n);
  for (auto _ : state) {
    p = reference::encrypt_block(p, bench_key(), CipherParams::for_block(n));
    benchmark::DoNotOptimize(p);
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * n / 8));
}

template <AvalancheResult (*Report)(const AvalancheOptions&)>
void BM_Avalanche(benchmark::State& state) {
  AvalancheOptions o;
  o.n = 128;
  o.trials = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(Report(o));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * o.trials));
}

}  // namespace

BENCHMARK(BM_Blocks<encrypt_blocks_serial>)->Name("encrypt_blocks/serial")->Arg(128)->Arg(256)->Arg(512);
BENCHMARK(BM_Blocks<encrypt_blocks>)->Name("encrypt_blocks/openmp")->Arg(128)->Arg(256)->Arg(512);
BENCHMARK(BM_Blocks<decrypt_blocks_serial>)->Name("decrypt_blocks/serial")->Arg(128)->Arg(256);
BENCHMARK(BM_Blocks<decrypt_blocks>)->Name("decrypt_blocks/openmp")->Arg(128)->Arg(256);
BENCHMARK(BM_ReferenceBlock)->Name("encrypt_block/reference")->Arg(128);
BENCHMARK(BM_Avalanche<avalanche_report_serial>)->Name("avalanche/serial")->Arg(512);
BENCHMARK(BM_Avalanche<avalanche_report>)->Name("avalanche/openmp")->Arg(512);

BENCHMARK_MAIN();

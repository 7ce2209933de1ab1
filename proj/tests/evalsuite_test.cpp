#include <doctest.h>

#include <cmath>
#include <omp.h>
#include <sstream>

#include "hca/evalsuite.hpp"
#include "support.hpp"

using namespace hca;

TEST_CASE("random streams are reproducible") {
  auto a = make_rng(5, 3), b = make_rng(5, 3), c = make_rng(5, 4);
  CHECK(a() == b());
  CHECK(a() != c());
  auto rng = make_rng(1);
  const auto k = random_valid_key(rng);
  CHECK(k.entropy() >= kKeyEntropyThreshold);
}

TEST_CASE("avalanche trial") {
  auto rng = make_rng(2);
  const auto key = random_valid_key(rng);
  const auto p = random_lattice(rng, 128);
  const CipherParams params;
  CHECK(popcount(avalanche_trial(key, p, AvalancheKind::plaintext, std::nullopt, params)) == 0);
  CHECK(popcount(avalanche_trial(key, p, AvalancheKind::key, std::nullopt, params)) == 0);
  const auto z = avalanche_trial(key, p, AvalancheKind::plaintext, 5, params);
  CHECK(z == xor_lattices(encrypt_block(p, key), encrypt_block(p.with_flipped(5), key)));
  CHECK_THROWS_AS(avalanche_trial(key, p, AvalancheKind::key, 256, params), FormatError);
  CHECK_THROWS_AS(avalanche_trial(key, p, AvalancheKind::plaintext, 128, params), FormatError);
  CHECK(parse_avalanche_kind("key") == AvalancheKind::key);
  CHECK_THROWS_AS(parse_avalanche_kind("iv"), FormatError);
}

TEST_CASE("avalanche report is independent of thread count") {
  AvalancheOptions opts;
  opts.n = 64;
  opts.trials = 200;
  opts.seed = 9;
  const auto serial = avalanche_report_serial(opts);
  const int saved = omp_get_max_threads();
  for (int threads : {1, 3}) {
    omp_set_num_threads(threads);
    const auto parallel = avalanche_report(opts);
    CHECK(parallel.report.mean_percent == serial.report.mean_percent);
    CHECK(parallel.report.sigma == serial.report.sigma);
    CHECK(parallel.entropy.avg == serial.entropy.avg);
  }
  omp_set_num_threads(saved);
  CHECK(serial.report.trials == 200);
  CHECK(serial.entropy.window == 6);
  CHECK(serial.report.mean_percent > 40);
  CHECK(serial.report.mean_percent < 60);
}

TEST_CASE("report formatting") {
  AvalancheOptions opts;
  opts.n = 32;
  opts.trials = 10;
  const auto r = avalanche_report_serial(opts);
  CHECK(report_csv_header() == "kind,N,trials,mean,sigma,ent_min,ent_max,ent_avg,ent_sigma");
  const auto row = report_csv_row(r);
  CHECK(std::count(row.begin(), row.end(), ',') == 8);
  CHECK(row.rfind("plaintext,32,10,", 0) == 0);
  CHECK(format_report(r).find("seed") != std::string::npos);
}

TEST_CASE("NIST sequence generator") {
  auto rng = make_rng(3);
  const BlockCipher cipher(random_valid_key(rng));
  const auto seq = nist_sequence(77, 4096, cipher);
  CHECK(seq.size() == 4096);
  CHECK(seq == nist_sequence(77, 4096, cipher));
  CHECK(seq != nist_sequence(78, 4096, cipher));

  // First block is P1 xor E(P1); P1 is the first block drawn from the seed.
  auto seed_rng = make_rng(77);
  const auto p1 = random_lattice(seed_rng, 128);
  const auto first = xor_lattices(p1, cipher.encrypt(p1));
  CHECK(std::equal(seq.begin(), seq.begin() + 16, first.to_bytes().begin()));
  CHECK_THROWS_AS(nist_sequence(1, 15, cipher), FormatError);
}

TEST_CASE("bit conversions") {
  const std::vector<std::uint8_t> bytes{0xA0};
  CHECK(bytes_to_bits(bytes) == std::vector<std::uint8_t>{1, 0, 1, 0, 0, 0, 0, 0});
  CHECK(ascii_to_bits("10 1\n0") == std::vector<std::uint8_t>{1, 0, 1, 0});
  CHECK_THROWS_AS(ascii_to_bits("102"), FormatError);
}

TEST_CASE("statistical tests against frozen oracle values") {
  for (const auto& line : test::data_lines("nist_vectors.txt")) {
    std::istringstream row(line);
    std::string name, bits;
    std::size_t block = 0;
    double mono = 0, freq = 0, runs = 0;
    row >> name >> block >> mono >> freq >> runs >> bits;
    CAPTURE(name);
    const auto b = ascii_to_bits(bits);
    CHECK(monobit_test(b) == doctest::Approx(mono).epsilon(1e-9));
    CHECK(block_frequency_test(b, block) == doctest::Approx(freq).epsilon(1e-9));
    CHECK(runs_test(b) == doctest::Approx(runs).epsilon(1e-9));
  }
}

TEST_CASE("statistical tests on extreme sequences") {
  std::vector<std::uint8_t> alt(10000);
  for (std::size_t i = 0; i < alt.size(); ++i) alt[i] = static_cast<std::uint8_t>(i & 1u);
  CHECK(monobit_test(alt) == doctest::Approx(1.0));
  CHECK(runs_test(alt) < 1e-10);
  const std::vector<std::uint8_t> zeros(10000, 0);
  CHECK(monobit_test(zeros) < 1e-10);
  CHECK_FALSE(smoke_tests(zeros).passed());
  CHECK_THROWS_AS(monobit_test(std::vector<std::uint8_t>(10, 0)), FormatError);
}

TEST_CASE("key space census") {
  const auto r1 = keyspace_census(1);
  CHECK(r1.exhaustive);
  CHECK(r1.keys_tested == 32);
  CHECK(r1.keys_discarded == 8);
  CHECK(r1.discard_percent() == 25.0);
  const auto r4 = keyspace_census(4, 1 << 14, 5);
  CHECK_FALSE(r4.exhaustive);
  CHECK(r4.patterns_tested == (1 << 14));
  CHECK(r4.keys_discarded == 0);
}

TEST_CASE("sequence file formats") {
  const std::vector<std::uint8_t> bytes{0xA5, 0x0F};
  std::ostringstream raw, ascii;
  write_sequence(raw, bytes, SequenceFormat::raw);
  write_sequence(ascii, bytes, parse_sequence_format("ascii"));
  CHECK(raw.str() == std::string("\xA5\x0F", 2));
  CHECK(ascii.str() == "1010010100001111");
  CHECK_THROWS_AS(parse_sequence_format("hex"), FormatError);
}

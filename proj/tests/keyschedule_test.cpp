#include <doctest.h>

#include <cmath>
#include <functional>
#include <map>
#include <random>

#include "hca/keyschedule.hpp"
#include "support.hpp"

using namespace hca;

namespace {

double naive_entropy(const std::string& bits, std::size_t w) {
  std::map<std::string, double> counts;
  const std::size_t n = bits.size();
  for (std::size_t i = 0; i < n; ++i) {
    std::string pattern;
    for (std::size_t j = 0; j < w; ++j) pattern += bits[(i + j) % n];
    counts[pattern] += 1;
  }
  double h = 0;
  for (const auto& [_, c] : counts) h -= c / n * std::log2(c / n);
  return h / static_cast<double>(w);
}

// Lyndon-word construction of the binary de Bruijn sequence of order n.
std::vector<std::uint8_t> de_bruijn(int n) {
  std::vector<int> a(2 * n + 1, 0);
  std::vector<std::uint8_t> seq;
  std::function<void(int, int)> db = [&](int t, int p) {
    if (t > n) {
      if (n % p == 0) {
        for (int j = 1; j <= p; ++j) seq.push_back(static_cast<std::uint8_t>(a[j]));
      }
      return;
    }
    a[t] = a[t - p];
    db(t + 1, p);
    for (int j = a[t - p] + 1; j < 2; ++j) {
      a[t] = j;
      db(t + 1, t);
    }
  };
  db(1, 1);
  return seq;
}

Key zero_key(int r, Direction d) {
  std::vector<std::uint8_t> bits(key_bits_for_radius(r), 0);
  bits.back() = d == Direction::right ? 1 : 0;
  return Key(bits);
}

}  // namespace

TEST_CASE("spatial entropy examples") {
  const std::vector<std::uint8_t> zeros(256, 0);
  CHECK(spatial_entropy(zeros, 8) == 0.0);
  const auto db = de_bruijn(8);
  REQUIRE(db.size() == 256);
  CHECK(spatial_entropy(db, 8) == doctest::Approx(1.0).epsilon(1e-12));
  const std::vector<std::uint8_t> alt{0, 1, 0, 1};
  CHECK(spatial_entropy(alt, 2) == doctest::Approx(0.5));
  CHECK_THROWS_AS(spatial_entropy(alt, 0), FormatError);
  CHECK_THROWS_AS(spatial_entropy(std::vector<std::uint8_t>{}, 2), FormatError);
}

TEST_CASE("spatial entropy agrees with direct counting") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const auto l = test::random_bits(rng, 8 + rng() % 300);
    const std::size_t w = 1 + rng() % 10;
    CHECK(spatial_entropy(l.cells(), w) == doctest::Approx(naive_entropy(l.to_bits(), w)).epsilon(1e-12));
  }
  CHECK(entropy_window_for(128) == 7);
  CHECK(entropy_window_for(256) == 8);
  CHECK(entropy_window_for(300) == 8);
}

TEST_CASE("key validation") {
  const auto zero = zero_key(4, Direction::left);
  CHECK(key_entropy(zero) == 0.0);
  CHECK_FALSE(key_acceptable(zero));
  try {
    validate_key(zero);
    FAIL("zero key accepted");
  } catch (const KeyRejected& e) {
    CHECK(e.entropy() == 0.0);
  }
  const auto good = parse_key("6E6906C8340B56635B11752F8FFE354F590B321D8BF5ED7E3CF9E7F8DFE508FE:L");
  CHECK(validate_key(good).entropy() >= kKeyEntropyThreshold);
}

TEST_CASE("r=1 key census by direct counting") {
  int rejected = 0;
  for (unsigned v = 0; v < 32; ++v) {
    std::vector<std::uint8_t> bits(5);
    for (int i = 0; i < 5; ++i) bits[i] = static_cast<std::uint8_t>((v >> (4 - i)) & 1u);
    std::string body;
    for (int i = 0; i < 4; ++i) body += static_cast<char>('0' + bits[i]);
    const bool naive_ok = naive_entropy(body, 2) >= 0.75 - 1e-12;
    CHECK(key_acceptable(Key(bits)) == naive_ok);
    rejected += naive_ok ? 0 : 1;
  }
  CHECK(rejected == 8);
}

TEST_CASE("rule derivation") {
  const auto zl = derive_main_rule(zero_key(4, Direction::left));
  REQUIRE(zl.size() == 512);
  for (std::size_t i = 0; i < 512; ++i) CHECK(zl[i] == (i < 256 ? 0 : 1));
  const auto zr = derive_main_rule(zero_key(4, Direction::right));
  for (std::size_t i = 0; i < 512; ++i) CHECK(zr[i] == (i % 2));

  CHECK(derive_main_rule(Key::from_bits("01110")) == Rule::elementary(30, Direction::left));
  CHECK(derive_border_rule(Key::from_bits("01110")) == Rule::elementary(15, Direction::left));

  const auto bl = derive_border_rule(zero_key(4, Direction::left));
  for (std::size_t i = 0; i < 512; ++i) CHECK(bl[i] == (i < 256 ? 1 : 0));
  const auto br = derive_border_rule(zero_key(4, Direction::right));
  for (std::size_t i = 0; i < 512; ++i) CHECK(br[i] == (i % 2 == 0 ? 1 : 0));

  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::uint8_t> bits(257);
    for (auto& b : bits) b = static_cast<std::uint8_t>(rng() & 1u);
    const Key k(bits);
    const auto m = derive_main_rule(k);
    const auto b = derive_border_rule(k);
    CHECK(m.toggle() == k.direction());
    CHECK(b.toggle() == k.direction());
    CHECK(b[0] != m[0]);
  }
}

TEST_CASE("round key schedule") {
  std::mt19937_64 rng(19);
  std::vector<std::uint8_t> bits(257);
  for (auto& b : bits) b = static_cast<std::uint8_t>(rng() & 1u);
  const Key k(bits);
  CHECK(round_key(k, 0, 128, Schedule::cipher) == k);
  for (std::size_t t = 0; t < 128; ++t) {
    CHECK(round_key(k, t, 128, Schedule::decipher) == round_key(k, 127 - t, 128, Schedule::cipher));
  }
  CHECK(round_key(k, 1, 128, Schedule::cipher).bits()[0] == k[1]);
  CHECK_THROWS_AS(round_key(k, 128, 128, Schedule::cipher), FormatError);
}

TEST_CASE("key text format") {
  const auto k = Key::from_bits("01110");
  CHECK(format_key(k) == "7:L");
  CHECK(parse_key("7:L") == k);
  CHECK(parse_key("  7:l \n") == k);
  CHECK(parse_key("7:R").direction() == Direction::right);
  CHECK_THROWS_AS(parse_key("7"), FormatError);
  CHECK_THROWS_AS(parse_key("7:X"), FormatError);
  CHECK_THROWS_AS(parse_key("77:L"), FormatError);

  const auto keys = parse_key_file("# comment\n\n7:L\nC:R  # trailing\n");
  REQUIRE(keys.size() == 2);
  CHECK(keys[1] == Key::from_bits("11001"));
}

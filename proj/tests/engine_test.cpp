#include <doctest.h>

#include <random>

#include "hca/engine.hpp"
#include "hca/keyschedule.hpp"
#include "support.hpp"

using namespace hca;

namespace {

// Direct per-cell evaluation, written independently of the engine.
std::string scalar_step(const std::string& s, const std::string& main, const std::string& border, int r) {
  const int n = static_cast<int>(s.size());
  std::string out(s.size(), '0');
  for (int i = 0; i < n; ++i) {
    unsigned idx = 0;
    for (int j = -r; j <= r; ++j) idx = idx * 2 + static_cast<unsigned>(s[((i + j) % n + n) % n] - '0');
    out[i] = (i < 2 * r ? border : main)[idx];
  }
  return out;
}

HybridStepConfig rule30_cfg(std::size_t n) {
  return HybridStepConfig::hybrid(Rule::elementary(30), Rule::elementary(15), n);
}

std::vector<Key> all_r1_keys() {
  std::vector<Key> keys;
  for (unsigned v = 0; v < 32; ++v) {
    std::vector<std::uint8_t> bits(5);
    for (int i = 0; i < 5; ++i) bits[i] = static_cast<std::uint8_t>((v >> (4 - i)) & 1u);
    keys.emplace_back(bits);
  }
  return keys;
}

}  // namespace

TEST_CASE("toggle classification") {
  CHECK(is_toggle(Rule::elementary(135), Direction::left));
  CHECK(is_toggle(Rule::elementary(169), Direction::right));
  CHECK(is_toggle(Rule::elementary(30), Direction::left));
  CHECK_FALSE(is_toggle(Rule::elementary(30), Direction::right));
  CHECK(is_absolute(Rule::elementary(15), Direction::left));
  CHECK(is_absolute(Rule::elementary(240), Direction::left));
  CHECK(is_absolute(Rule::elementary(85), Direction::right));
  CHECK_FALSE(is_absolute(Rule::elementary(30), Direction::left));
}

TEST_CASE("hybrid configuration checks") {
  CHECK(rule30_cfg(8).invertible());
  CHECK(rule30_cfg(8).direction() == Direction::left);
  CHECK_THROWS_AS(HybridStepConfig::hybrid(Rule::elementary(30), Rule::elementary(30), 8), FormatError);
  CHECK_THROWS_AS(HybridStepConfig::hybrid(Rule::elementary(204), Rule::elementary(15), 8), FormatError);
  CHECK_THROWS_AS(rule30_cfg(3), FormatError);
  CHECK_FALSE(HybridStepConfig::unchecked(Rule::elementary(0), Rule::elementary(0), 8).invertible());
}

TEST_CASE("forward step examples") {
  const auto cfg = rule30_cfg(8);
  CHECK(forward_step(Lattice::from_bits("01101001"), cfg).to_bits() == "01001111");
  CHECK(forward_step(Lattice::from_bits("00000000"), cfg).to_bits() == "11000000");
  CHECK(scalar_step("01101001", "01111000", "11110000", 1) == "01001111");
}

TEST_CASE("forward step agrees with the scalar evaluator") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const int r = 1 + static_cast<int>(rng() % 3);
    const std::size_t rule_bits = rule_size_for_radius(r);
    std::string main(rule_bits, '0'), border(rule_bits, '0');
    for (auto& c : main) c = static_cast<char>('0' + (rng() & 1u));
    for (auto& c : border) c = static_cast<char>('0' + (rng() & 1u));
    const std::size_t n = 2 * r + 2 + rng() % 40;
    const auto s = test::random_bits(rng, n);
    const auto cfg = HybridStepConfig::unchecked(Rule::from_bits(main), Rule::from_bits(border), n);
    CHECK(forward_step(s, cfg).to_bits() == scalar_step(s.to_bits(), main, border, r));
  }
}

TEST_CASE("large lattices take the parallel path") {
  std::mt19937_64 rng(9);
  const auto k = validate_key(parse_key("6E6906C8340B56635B11752F8FFE354F590B321D8BF5ED7E3CF9E7F8DFE508FE:L"));
  const auto cfg = HybridStepConfig::hybrid(derive_main_rule(k.key()), derive_border_rule(k.key()), 10000);
  const auto s = test::random_bits(rng, 10000);
  const auto next = forward_step(s, cfg);
  CHECK(next.to_bits() == scalar_step(s.to_bits(), cfg.main().to_bits(), cfg.border().to_bits(), 4));
  CHECK(forward_step(preimage_step(s, cfg), cfg) == s);
}

TEST_CASE("pre-image examples") {
  const auto cfg = rule30_cfg(8);
  CHECK(preimage_step(Lattice::from_bits("01001111"), cfg).to_bits() == "01101001");
  CHECK(preimage_step(Lattice::from_bits("0100101"), rule30_cfg(7)).to_bits() == "0110101");
  CHECK_THROWS_AS(preimage_step(Lattice(8), HybridStepConfig::unchecked(Rule::elementary(0), Rule::elementary(0), 8)),
                  FormatError);
  CHECK_THROWS_AS(preimage_step(Lattice(9), cfg), FormatError);
}

TEST_CASE("pre-image is unique and matches brute force for every r=1 valid pair") {
  for (const auto& key : all_r1_keys()) {
    const auto cfg = HybridStepConfig::hybrid(derive_main_rule(key), derive_border_rule(key), 8);
    for (unsigned v = 0; v < 256; ++v) {
      std::vector<std::uint8_t> cells(8);
      for (int i = 0; i < 8; ++i) cells[i] = static_cast<std::uint8_t>((v >> (7 - i)) & 1u);
      const Lattice s(cells);
      const auto all = brute_force_preimages(s, cfg);
      REQUIRE(all.size() == 1);
      CHECK(all.front() == preimage_step(s, cfg));
    }
  }
}

TEST_CASE("pre-image inverts forward evolution at r=4") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<std::uint8_t> bits(257);
    for (auto& b : bits) b = static_cast<std::uint8_t>(rng() & 1u);
    const Key key(bits);
    const auto cfg = HybridStepConfig::hybrid(derive_main_rule(key), derive_border_rule(key), 128);
    const auto s = test::random_bits(rng, 128);
    REQUIRE(forward_step(preimage_step(s, cfg), cfg) == s);
    REQUIRE(preimage_step(forward_step(s, cfg), cfg) == s);
  }
}

TEST_CASE("brute force on degenerate rules") {
  const auto zero = HybridStepConfig::unchecked(Rule::elementary(0), Rule::elementary(0), 8);
  CHECK(brute_force_preimages(Lattice(8), zero).size() == 256);
  CHECK(brute_force_preimages(Lattice::from_bits("00010000"), zero).empty());
  CHECK_THROWS_AS(brute_force_preimages(Lattice(25), HybridStepConfig::unchecked(Rule::elementary(0),
                                                                                  Rule::elementary(0), 25)),
                  FormatError);
}

TEST_CASE("a non-toggle main rule loses uniqueness") {
  // Rule 204 copies the center cell, so pre-image cell 1 is never constrained.
  const auto cfg = HybridStepConfig::unchecked(Rule::elementary(204), Rule::elementary(15), 8);
  bool broken = false;
  for (unsigned v = 0; v < 256 && !broken; ++v) {
    std::vector<std::uint8_t> cells(8);
    for (int i = 0; i < 8; ++i) cells[i] = static_cast<std::uint8_t>((v >> (7 - i)) & 1u);
    broken = brute_force_preimages(Lattice(cells), cfg).size() != 1;
  }
  CHECK(broken);
}

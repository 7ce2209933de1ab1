#include <doctest.h>

#include <algorithm>

#include "hca/engine.hpp"
#include "hca/graph.hpp"
#include "hca/keyschedule.hpp"

using namespace hca;

namespace {

Transducer rule30_machine() { return build_backward_transducer(Rule::elementary(30), Rule::elementary(15)); }

std::vector<Key> all_keys(int r) {
  const std::size_t len = key_bits_for_radius(r);
  std::vector<Key> keys;
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << len); ++v) {
    std::vector<std::uint8_t> bits(len);
    for (std::size_t i = 0; i < len; ++i) bits[i] = static_cast<std::uint8_t>((v >> (len - 1 - i)) & 1u);
    keys.emplace_back(bits);
  }
  return keys;
}

Lattice lattice_of(unsigned v, std::size_t n) {
  std::vector<std::uint8_t> cells(n);
  for (std::size_t i = 0; i < n; ++i) cells[i] = static_cast<std::uint8_t>((v >> (n - 1 - i)) & 1u);
  return Lattice(cells);
}

}  // namespace

TEST_CASE("worked example") {
  const auto t = rule30_machine();
  const auto s = Lattice::from_bits("0100101");
  CHECK(transducer_input(t, s) == "0110100");
  const auto result = run(t, transducer_input(t, s));
  const std::vector<std::string> expected{"s0", "s2", "s5", "q6", "q1", "q6", "q1", "q2"};
  REQUIRE(result.path.size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) CHECK(t.states()[result.path[i]].name == expected[i]);
  CHECK(result.output == "1001011");
  CHECK(replay_preimage(t, s).to_bits() == "0110101");
}

TEST_CASE("structure") {
  const auto t = rule30_machine();
  CHECK(t.main_count() == 8);
  CHECK(t.first_main() == 7);
  CHECK_FALSE(t.states()[t.initial()].output.has_value());
  for (std::size_t i = 1; i < t.states().size(); ++i) CHECK(t.states()[i].output.has_value());
  for (const auto& s : t.states()) {
    for (auto next : s.next) CHECK(next < t.states().size());
    if (s.main) {
      for (auto next : s.next) CHECK(t.states()[next].main);
    }
  }
  CHECK_THROWS_AS(build_backward_transducer(Rule::elementary(204), Rule::elementary(15)), FormatError);
  CHECK_THROWS_AS(run(t, "012"), FormatError);
  std::vector<std::uint8_t> r3(rule_size_for_radius(3));
  std::fill(r3.begin() + r3.size() / 2, r3.end(), 1);
  CHECK_THROWS_AS(build_backward_transducer(Rule(r3, 3), Rule(r3, 3)), FormatError);
}

TEST_CASE("replay matches the engine for every N=8 configuration") {
  for (int r : {1, 2}) {
    for (const auto& key : all_keys(r)) {
      if (r == 2 && key.bits()[0] != key.bits()[5]) continue;  // thin the 2^17 keys
      const auto main = derive_main_rule(key);
      const auto border = derive_border_rule(key);
      const auto t = build_backward_transducer(main, border);
      const auto cfg = HybridStepConfig::hybrid(main, border, 8);
      for (unsigned v = 0; v < 256; ++v) {
        const auto s = lattice_of(v, 8);
        REQUIRE(replay_preimage(t, s) == preimage_step(s, cfg));
      }
    }
  }
}

TEST_CASE("DOT export") {
  const auto t = rule30_machine();
  const auto dot = export_dot(t);
  CHECK(dot == export_dot(rule30_machine()));
  CHECK(dot.rfind("digraph", 0) == 0);
  CHECK(dot.find("q7 [label=\"q7/") != std::string::npos);
  CHECK(dot.find("s0 [label=\"s0/e\"]") != std::string::npos);
  CHECK(std::count(dot.begin(), dot.end(), '\n') == 5 + 15 + 30 + 1);
  CHECK_THROWS_AS(export_dot(Transducer{}), FormatError);
}

TEST_CASE("Hamiltonian cycles on small graphs") {
  CHECK(hamiltonian_cycles(complete_digraph(3)).size() == 2);
  CHECK(hamiltonian_cycles(complete_digraph(4)).size() == 6);
  Digraph path{4, {{1}, {2}, {3}, {}}};
  CHECK(hamiltonian_cycles(path).empty());
  Digraph ring{4, {{1}, {2}, {3}, {0}}};
  CHECK(hamiltonian_cycles(ring).size() == 1);
  CHECK_THROWS_AS(hamiltonian_cycles(complete_digraph(17)), FormatError);
  CHECK(format_cycle({0, 4, 6}) == "(q0, q4, q6, q0)");
}

TEST_CASE("rule 30 machine has two Hamiltonian cycles") {
  const auto cycles = hamiltonian_cycles(rule30_machine());
  CHECK(cycles.size() == 2);
  const std::vector<std::size_t> a{0, 4, 6, 1, 2, 3, 7, 5};
  const std::vector<std::size_t> b{0, 4, 2, 3, 7, 1, 6, 5};
  CHECK(std::find(cycles.begin(), cycles.end(), a) != cycles.end());
  CHECK(std::find(cycles.begin(), cycles.end(), b) != cycles.end());
}

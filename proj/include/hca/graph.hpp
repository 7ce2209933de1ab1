#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hca/core.hpp"

namespace hca {

/// Moore machine for one backward (pre-image) step of a hybrid rule pair.
///
/// Lattice bits are consumed in the order the pre-image is solved: the 2r
/// border cells first, then the main cells walking away from the border
/// (descending for left-toggle, ascending for right-toggle). Every consumed
/// bit yields one pre-image bit.
///
/// States:
///  - s_k, a heap-numbered tree over the emitted border bits (child
///    2k+1+bit). s_0 is the initial state and outputs nothing.
///  - q_i, one per (consumed bit, known context) pair. For left-toggle
///    i = (x << 2r) | W, for right-toggle i = (W << 1) | x, where W holds the
///    2r already-known pre-image neighbors (leftmost as MSB). The output of
///    q_i is the neighbor that the main rule forces.
class Transducer {
 public:
  struct State {
    std::string name;
    std::optional<std::uint8_t> output;  // nullopt is the empty output
    std::array<std::size_t, 2> next{};
    bool main = false;
  };

  Transducer() = default;

  bool empty() const noexcept { return states_.empty(); }
  int radius() const noexcept { return radius_; }
  Direction direction() const noexcept { return direction_; }
  const std::vector<State>& states() const noexcept { return states_; }
  std::size_t initial() const noexcept { return 0; }
  std::size_t first_main() const noexcept { return first_main_; }
  std::size_t main_count() const noexcept { return states_.size() - first_main_; }

 private:
  friend Transducer build_backward_transducer(const Rule& main, const Rule& border);

  int radius_ = 0;
  Direction direction_ = Direction::left;
  std::size_t first_main_ = 0;
  std::vector<State> states_;
};

inline constexpr int kTransducerMaxRadius = 2;

Transducer build_backward_transducer(const Rule& main, const Rule& border);

struct TransducerRun {
  std::vector<std::size_t> path;  // starts at the initial state
  std::string output;             // one '0'/'1' per consumed bit
};

TransducerRun run(const Transducer& t, std::string_view input);

/// Lattice indices in consumption order for a lattice of n cells.
std::vector<std::size_t> consumption_order(std::size_t n, int radius, Direction d);
/// Pre-image index written by the k-th consumed bit.
std::vector<std::size_t> emission_positions(std::size_t n, int radius, Direction d);

/// Feeds s through the machine and places every output at its pre-image cell.
Lattice replay_preimage(const Transducer& t, const Lattice& s);

/// The machine's consumed input for s, as a '0'/'1' string.
std::string transducer_input(const Transducer& t, const Lattice& s);

/// Graphviz digraph with a fixed state order.
std::string export_dot(const Transducer& t);

struct Digraph {
  std::size_t vertices = 0;
  std::vector<std::vector<std::size_t>> successors;
};

Digraph complete_digraph(std::size_t n);
/// Subgraph induced by the q states, vertex i = q_i.
Digraph main_state_graph(const Transducer& t);

inline constexpr std::size_t kHamiltonianMaxVertices = 16;

/// Every directed Hamiltonian cycle, each listed once starting from vertex 0
/// (the closing return to vertex 0 is implied).
std::vector<std::vector<std::size_t>> hamiltonian_cycles(const Digraph& g);
std::vector<std::vector<std::size_t>> hamiltonian_cycles(const Transducer& t);

std::string format_cycle(const std::vector<std::size_t>& cycle, char prefix = 'q');

}  // namespace hca

#pragma once

#include <cstddef>
#include <vector>

#include "hca/core.hpp"

namespace hca {

/// True iff flipping the extreme neighbor on side d always flips the output.
bool is_toggle(const Rule& rule, Direction d) noexcept;

/// True iff the output is a copy or complement of the extreme neighbor on side
/// d, independent of every other neighbor.
bool is_absolute(const Rule& rule, Direction d) noexcept;

/// One hybrid evolution step: cells 0..2r-1 use the border rule, the rest the
/// main rule.
class HybridStepConfig {
 public:
  /// Invertible configuration: both rules toggle in the same direction and
  /// the border rule is absolute. Throws FormatError otherwise.
  static HybridStepConfig hybrid(Rule main, Rule border, std::size_t cells);

  /// Any pair of same-radius rules. Only forward evolution and the brute
  /// force oracle accept such a configuration.
  static HybridStepConfig unchecked(Rule main, Rule border, std::size_t cells);

  const Rule& main() const noexcept { return main_; }
  const Rule& border() const noexcept { return border_; }
  std::size_t cells() const noexcept { return cells_; }
  int radius() const noexcept { return main_.radius(); }
  std::size_t border_cells() const noexcept { return 2 * static_cast<std::size_t>(radius()); }

  bool invertible() const noexcept { return invertible_; }
  /// Only meaningful when invertible().
  Direction direction() const noexcept { return direction_; }

 private:
  HybridStepConfig(Rule main, Rule border, std::size_t cells);

  Rule main_;
  Rule border_;
  std::size_t cells_;
  bool invertible_ = false;
  Direction direction_ = Direction::left;
};

/// Neighborhood value of cell i: s[i-r..i+r] read circularly, leftmost as MSB.
std::size_t neighborhood(const Lattice& s, std::size_t i, int radius) noexcept;

Lattice forward_step(const Lattice& s, const HybridStepConfig& cfg);

/// The unique p with forward_step(p, cfg) == s. The main-cell chain is
/// solved one cell at a time; each cell depends on the one solved before it.
Lattice preimage_step(const Lattice& s, const HybridStepConfig& cfg);

/// Largest lattice brute_force_preimages will enumerate.
inline constexpr std::size_t kBruteForceMaxCells = 24;

/// Every p with forward_step(p, cfg) == s, by enumerating all 2^N lattices.
std::vector<Lattice> brute_force_preimages(const Lattice& s, const HybridStepConfig& cfg);

}  // namespace hca

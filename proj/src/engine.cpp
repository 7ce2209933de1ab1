#include "hca/engine.hpp"

#include <string>

namespace hca {

namespace {

// Below this size the thread fork costs more than the step itself.
constexpr std::size_t kParallelCells = 4096;

}  // namespace

bool is_toggle(const Rule& rule, Direction d) noexcept {
  const auto t = rule.table();
  const std::size_t half = t.size() / 2;
  for (std::size_t n = 0; n < half; ++n) {
    if (d == Direction::left ? t[n] == t[n + half] : t[2 * n] == t[2 * n + 1]) return false;
  }
  return true;
}

bool is_absolute(const Rule& rule, Direction d) noexcept {
  const auto t = rule.table();
  const std::size_t half = t.size() / 2;
  for (std::size_t n = 0; n < t.size(); ++n) {
    const std::size_t extreme = d == Direction::left ? n / half : n & 1u;
    if ((t[n] ^ t[0]) != extreme) return false;
  }
  return true;
}

HybridStepConfig::HybridStepConfig(Rule main, Rule border, std::size_t cells)
    : main_(std::move(main)), border_(std::move(border)), cells_(cells) {
  if (main_.radius() != border_.radius()) throw FormatError("main and border rule radii differ");
  if (cells_ < border_cells() + 2) {
    throw FormatError("lattice of " + std::to_string(cells_) + " cells is too small for radius " +
                      std::to_string(radius()));
  }
  for (Direction d : {Direction::left, Direction::right}) {
    if (is_toggle(main_, d) && is_absolute(border_, d)) {
      invertible_ = true;
      direction_ = d;
      break;
    }
  }
}

HybridStepConfig HybridStepConfig::hybrid(Rule main, Rule border, std::size_t cells) {
  HybridStepConfig cfg(std::move(main), std::move(border), cells);
  if (!cfg.invertible()) {
    throw FormatError("main rule must toggle and border rule must be absolute in the same direction");
  }
  return cfg;
}

HybridStepConfig HybridStepConfig::unchecked(Rule main, Rule border, std::size_t cells) {
  return HybridStepConfig(std::move(main), std::move(border), cells);
}

std::size_t neighborhood(const Lattice& s, std::size_t i, int radius) noexcept {
  std::size_t v = 0;
  const auto center = static_cast<std::ptrdiff_t>(i);
  for (std::ptrdiff_t d = -radius; d <= radius; ++d) v = (v << 1) | s.at(center + d);
  return v;
}

Lattice forward_step(const Lattice& s, const HybridStepConfig& cfg) {
  const std::size_t n = cfg.cells();
  if (s.size() != n) throw FormatError("forward_step: lattice size does not match configuration");
  const int r = cfg.radius();
  const std::size_t width = 2 * static_cast<std::size_t>(r) + 1;
  const std::size_t mask = (std::size_t{1} << width) - 1;
  const std::size_t border = cfg.border_cells();
  const auto main = cfg.main().table();
  const auto edge = cfg.border().table();
  const auto in = s.cells();
  std::vector<std::uint8_t> out(n);

  // Each chunk seeds its own rolling neighborhood.
  const auto chunks = static_cast<std::ptrdiff_t>(n < kParallelCells ? 1 : (n + 1023) / 1024);
#pragma omp parallel for schedule(static) if (chunks > 1)
  for (std::ptrdiff_t c = 0; c < chunks; ++c) {
    const std::size_t lo = static_cast<std::size_t>(c) * n / static_cast<std::size_t>(chunks);
    const std::size_t hi = static_cast<std::size_t>(c + 1) * n / static_cast<std::size_t>(chunks);
    std::size_t v = neighborhood(s, lo, r);
    for (std::size_t i = lo; i < hi; ++i) {
      out[i] = i < border ? edge[v] : main[v];
      v = ((v << 1) | in[(i + r + 1) % n]) & mask;
    }
  }
  return Lattice(std::move(out));
}

Lattice preimage_step(const Lattice& s, const HybridStepConfig& cfg) {
  if (!cfg.invertible()) throw FormatError("preimage_step: configuration is not invertible");
  const std::size_t n = cfg.cells();
  if (s.size() != n) throw FormatError("preimage_step: lattice size does not match configuration");
  const auto r = static_cast<std::size_t>(cfg.radius());
  const std::size_t span = 2 * r;
  const auto in = s.cells();
  const auto main = cfg.main().table();
  const std::uint8_t border_zero = cfg.border()[0];
  std::vector<std::uint8_t> p(n);

  if (cfg.direction() == Direction::left) {
    // Border cell i copies or complements p[i-r]: fixes p[n-r..n-1] and p[0..r-1].
    for (std::size_t i = 0; i < span; ++i) p[(i + n - r) % n] = in[i] ^ border_zero;
    // Cell i (from n-1 down to 2r) has one unknown, its leftmost neighbor p[i-r].
    std::size_t known = 0;  // p[i-r+1..i+r], leftmost as MSB
    for (std::size_t j = 0; j < span; ++j) known = (known << 1) | p[(n - r + j) % n];
    for (std::size_t i = n - 1; i >= span; --i) {
      const std::uint8_t bit = main[known] ^ in[i];  // probe 0; toggling fixes a mismatch
      p[i - r] = bit;
      known = (static_cast<std::size_t>(bit) << (span - 1)) | (known >> 1);
    }
  } else {
    // Border cell i copies or complements p[i+r]: fixes p[r..3r-1].
    for (std::size_t i = 0; i < span; ++i) p[i + r] = in[i] ^ border_zero;
    const std::size_t mask = (std::size_t{1} << span) - 1;
    std::size_t known = 0;  // p[i-r..i+r-1]
    for (std::size_t j = 0; j < span; ++j) known = (known << 1) | p[r + j];
    for (std::size_t i = span; i < n; ++i) {
      const std::uint8_t bit = main[known << 1] ^ in[i];
      p[(i + r) % n] = bit;
      known = ((known << 1) | bit) & mask;
    }
  }
  return Lattice(std::move(p));
}

std::vector<Lattice> brute_force_preimages(const Lattice& s, const HybridStepConfig& cfg) {
  const std::size_t n = cfg.cells();
  if (n > kBruteForceMaxCells) {
    throw FormatError("brute_force_preimages: " + std::to_string(n) + " cells exceeds the limit of " +
                      std::to_string(kBruteForceMaxCells));
  }
  if (s.size() != n) throw FormatError("brute_force_preimages: lattice size mismatch");
  std::vector<Lattice> found;
  std::vector<std::uint8_t> cells(n);
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
    for (std::size_t i = 0; i < n; ++i) cells[i] = static_cast<std::uint8_t>((x >> (n - 1 - i)) & 1u);
    Lattice candidate(cells);
    if (forward_step(candidate, cfg) == s) found.push_back(std::move(candidate));
  }
  return found;
}

}  // namespace hca

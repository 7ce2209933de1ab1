#include "hca/core.hpp"

#include <algorithm>
#include <bit>

namespace hca {

namespace {

void require_binary(std::span<const std::uint8_t> cells, const char* what) {
  for (auto c : cells) {
    if (c > 1) throw FormatError(std::string(what) + ": cell values must be 0 or 1");
  }
}

std::vector<std::uint8_t> parse_bits(std::string_view bits, const char* what) {
  std::vector<std::uint8_t> out;
  out.reserve(bits.size());
  for (char c : bits) {
    if (c != '0' && c != '1') throw FormatError(std::string(what) + ": expected '0' or '1'");
    out.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return out;
}

std::string bits_to_string(std::span<const std::uint8_t> cells) {
  std::string s(cells.size(), '0');
  for (std::size_t i = 0; i < cells.size(); ++i) s[i] = cells[i] ? '1' : '0';
  return s;
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

const char* to_string(Direction d) noexcept { return d == Direction::left ? "left" : "right"; }

// Lattice

Lattice::Lattice(std::vector<std::uint8_t> cells) : cells_(std::move(cells)) {
  require_binary(cells_, "lattice");
}

Lattice Lattice::from_bits(std::string_view bits) { return Lattice(parse_bits(bits, "lattice")); }

Lattice Lattice::from_bytes(std::span<const std::uint8_t> bytes) {
  std::vector<std::uint8_t> cells(bytes.size() * 8);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    cells[i] = static_cast<std::uint8_t>((bytes[i / 8] >> (7 - i % 8)) & 1u);
  }
  return Lattice(std::move(cells));
}

std::uint8_t Lattice::at(std::ptrdiff_t i) const noexcept {
  const auto n = static_cast<std::ptrdiff_t>(cells_.size());
  auto m = i % n;
  if (m < 0) m += n;
  return cells_[static_cast<std::size_t>(m)];
}

std::string Lattice::to_bits() const { return bits_to_string(cells_); }

std::vector<std::uint8_t> Lattice::to_bytes() const {
  if (cells_.size() % 8 != 0) throw FormatError("lattice size is not a whole number of bytes");
  std::vector<std::uint8_t> out(cells_.size() / 8, 0);
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    out[i / 8] = static_cast<std::uint8_t>(out[i / 8] | (cells_[i] << (7 - i % 8)));
  }
  return out;
}

Lattice Lattice::with_flipped(std::size_t i) const {
  if (i >= cells_.size()) throw FormatError("flip index out of range");
  auto copy = cells_;
  copy[i] ^= 1u;
  return Lattice(std::move(copy));
}

Lattice rotate(const Lattice& l, std::size_t k, Direction d) {
  const std::size_t n = l.size();
  if (n == 0) return l;
  k %= n;
  const auto cells = l.cells();
  std::vector<std::uint8_t> out(cells.begin(), cells.end());
  if (d == Direction::left) {
    std::rotate(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(k), out.end());
  } else {
    std::rotate(out.begin(), out.end() - static_cast<std::ptrdiff_t>(k), out.end());
  }
  return Lattice(std::move(out));
}

Lattice xor_lattices(const Lattice& a, const Lattice& b) {
  if (a.size() != b.size()) throw FormatError("xor: lattice lengths differ");
  std::vector<std::uint8_t> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.cells()[i] ^ b.cells()[i];
  return Lattice(std::move(out));
}

std::size_t popcount(const Lattice& l) {
  return static_cast<std::size_t>(std::count(l.cells().begin(), l.cells().end(), std::uint8_t{1}));
}

double ones_fraction(const Lattice& l) {
  if (l.empty()) throw FormatError("ones_fraction: empty lattice");
  return static_cast<double>(popcount(l)) / static_cast<double>(l.size());
}

std::string encode_hex(const Lattice& l) {
  static constexpr char digits[] = "0123456789ABCDEF";
  if (l.size() % 4 != 0) throw FormatError("hex encoding needs a multiple of 4 cells");
  std::string out(l.size() / 4, '0');
  const auto c = l.cells();
  for (std::size_t i = 0; i < out.size(); ++i) {
    const unsigned v = (c[4 * i] << 3) | (c[4 * i + 1] << 2) | (c[4 * i + 2] << 1) | c[4 * i + 3];
    out[i] = digits[v];
  }
  return out;
}

Lattice decode_hex(std::string_view text) {
  std::vector<std::uint8_t> cells(text.size() * 4);
  for (std::size_t i = 0; i < text.size(); ++i) {
    const int v = hex_value(text[i]);
    if (v < 0) throw FormatError("invalid hex digit '" + std::string(1, text[i]) + "'");
    for (int b = 0; b < 4; ++b) cells[4 * i + b] = static_cast<std::uint8_t>((v >> (3 - b)) & 1);
  }
  return Lattice(std::move(cells));
}

Lattice decode_hex(std::string_view text, std::size_t expected_bits) {
  if (text.size() * 4 != expected_bits) {
    throw FormatError("expected " + std::to_string(expected_bits / 4) + " hex digits, got " +
                      std::to_string(text.size()));
  }
  return decode_hex(text);
}

// Rule

namespace {

bool holds_toggle(std::span<const std::uint8_t> table, Direction d) {
  const std::size_t half = table.size() / 2;
  for (std::size_t n = 0; n < half; ++n) {
    const bool differs = d == Direction::left ? table[n] != table[n + half]
                                              : table[2 * n] != table[2 * n + 1];
    if (!differs) return false;
  }
  return true;
}

}  // namespace

Rule::Rule(std::vector<std::uint8_t> table, int radius, std::optional<Direction> toggle)
    : table_(std::move(table)), radius_(radius), toggle_(toggle) {
  if (radius_ < 1 || radius_ > 8) throw FormatError("rule radius out of range");
  if (table_.size() != rule_size_for_radius(radius_)) {
    throw FormatError("rule table must have 2^(2r+1) entries");
  }
  require_binary(table_, "rule");
  if (toggle_ && !holds_toggle(table_, *toggle_)) {
    throw FormatError(std::string("rule is not ") + to_string(*toggle_) + "-toggle");
  }
}

Rule Rule::elementary(unsigned number, std::optional<Direction> toggle) {
  if (number > 255) throw FormatError("elementary rule number must be < 256");
  std::vector<std::uint8_t> table(8);
  for (unsigned n = 0; n < 8; ++n) table[n] = static_cast<std::uint8_t>((number >> n) & 1u);
  return Rule(std::move(table), 1, toggle);
}

Rule Rule::from_bits(std::string_view table, std::optional<Direction> toggle) {
  auto cells = parse_bits(table, "rule");
  const auto width = std::bit_width(cells.size()) - 1;
  if (!std::has_single_bit(cells.size()) || width % 2 == 0) {
    throw FormatError("rule table length must be 2^(2r+1)");
  }
  return Rule(std::move(cells), static_cast<int>((width - 1) / 2), toggle);
}

std::string Rule::to_bits() const { return bits_to_string(table_); }

// Key

Key::Key(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  require_binary(bits_, "key");
  const std::size_t body = bits_.empty() ? 0 : bits_.size() - 1;
  const auto width = std::bit_width(body) - 1;
  if (body < 4 || !std::has_single_bit(body) || width % 2 != 0) {
    throw FormatError("key length must be 2^(2r)+1 bits, got " + std::to_string(bits_.size()));
  }
  radius_ = static_cast<int>(width / 2);
}

Key Key::from_bits(std::string_view bits) { return Key(parse_bits(bits, "key")); }

Key Key::rotated_left(std::size_t k) const {
  auto copy = bits_;
  std::rotate(copy.begin(), copy.begin() + static_cast<std::ptrdiff_t>(k % copy.size()), copy.end());
  return Key(std::move(copy));
}

Key Key::with_flipped(std::size_t i) const {
  if (i >= bits_.size()) throw FormatError("key flip index out of range");
  auto copy = bits_;
  copy[i] ^= 1u;
  return Key(std::move(copy));
}

}  // namespace hca

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hca {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: wrong lengths, bad text encodings, out-of-range indices.
class FormatError : public Error {
 public:
  using Error::Error;
};

enum class Direction : std::uint8_t { left, right };

constexpr Direction opposite(Direction d) noexcept {
  return d == Direction::left ? Direction::right : Direction::left;
}

const char* to_string(Direction d) noexcept;

/// Circular sequence of binary cells; the CA configuration and the cipher block.
///
/// Cells are stored one per byte (values 0 or 1). A Lattice is never mutated
/// through its public interface; every operation returns a new value.
class Lattice {
 public:
  Lattice() = default;
  explicit Lattice(std::size_t size) : cells_(size, 0) {}
  explicit Lattice(std::vector<std::uint8_t> cells);

  /// Parses a string of '0'/'1' characters.
  static Lattice from_bits(std::string_view bits);
  /// Bit 0 is the most significant bit of the first byte.
  static Lattice from_bytes(std::span<const std::uint8_t> bytes);

  std::size_t size() const noexcept { return cells_.size(); }
  bool empty() const noexcept { return cells_.empty(); }

  /// Circular access: index is reduced mod size().
  std::uint8_t operator[](std::size_t i) const noexcept { return cells_[i % cells_.size()]; }
  std::uint8_t at(std::ptrdiff_t i) const noexcept;

  std::span<const std::uint8_t> cells() const noexcept { return cells_; }

  std::string to_bits() const;
  /// Requires size() % 8 == 0.
  std::vector<std::uint8_t> to_bytes() const;

  Lattice with_flipped(std::size_t i) const;

  friend bool operator==(const Lattice&, const Lattice&) = default;

 private:
  std::vector<std::uint8_t> cells_;
};

/// Circular rotation by k cells. Left moves cell k to position 0.
Lattice rotate(const Lattice& l, std::size_t k, Direction d);
Lattice xor_lattices(const Lattice& a, const Lattice& b);
double ones_fraction(const Lattice& l);
std::size_t popcount(const Lattice& l);

std::string encode_hex(const Lattice& l);
Lattice decode_hex(std::string_view text);
/// Checks the decoded width as well.
Lattice decode_hex(std::string_view text, std::size_t expected_bits);

/// Lookup table of 2^(2r+1) output bits, indexed by the neighborhood value
/// with the leftmost neighbor as the most significant bit.
class Rule {
 public:
  /// Throws FormatError if the table size is not 2^(2r+1) or if a declared
  /// toggle direction does not hold for the table.
  Rule(std::vector<std::uint8_t> table, int radius, std::optional<Direction> toggle = std::nullopt);

  /// Elementary (r=1) rule by Wolfram number: table[n] = bit n of number.
  static Rule elementary(unsigned number, std::optional<Direction> toggle = std::nullopt);
  /// Parses a '0'/'1' table string in ascending neighborhood order.
  static Rule from_bits(std::string_view table, std::optional<Direction> toggle = std::nullopt);

  int radius() const noexcept { return radius_; }
  std::size_t size() const noexcept { return table_.size(); }
  std::optional<Direction> toggle() const noexcept { return toggle_; }
  std::span<const std::uint8_t> table() const noexcept { return table_; }
  std::uint8_t operator[](std::size_t neighborhood) const noexcept { return table_[neighborhood]; }

  std::string to_bits() const;

  friend bool operator==(const Rule&, const Rule&) = default;

 private:
  std::vector<std::uint8_t> table_;
  int radius_ = 0;
  std::optional<Direction> toggle_;
};

/// The secret: 2^(2r)+1 bits. The first 2^(2r) generate the rules, the last
/// selects the toggle direction (0 = left, 1 = right).
class Key {
 public:
  explicit Key(std::vector<std::uint8_t> bits);

  static Key from_bits(std::string_view bits);

  int radius() const noexcept { return radius_; }
  std::size_t size() const noexcept { return bits_.size(); }
  std::size_t body_size() const noexcept { return bits_.size() - 1; }
  std::span<const std::uint8_t> bits() const noexcept { return bits_; }
  std::span<const std::uint8_t> body() const noexcept { return {bits_.data(), bits_.size() - 1}; }
  std::uint8_t operator[](std::size_t i) const noexcept { return bits_[i]; }

  Direction direction() const noexcept {
    return bits_.back() != 0 ? Direction::right : Direction::left;
  }

  Key rotated_left(std::size_t k) const;
  Key with_flipped(std::size_t i) const;

  friend bool operator==(const Key&, const Key&) = default;

 private:
  std::vector<std::uint8_t> bits_;
  int radius_ = 0;
};

/// Key length for a radius: 2^(2r)+1.
constexpr std::size_t key_bits_for_radius(int r) noexcept { return (std::size_t{1} << (2 * r)) + 1; }
/// Rule table length for a radius: 2^(2r+1).
constexpr std::size_t rule_size_for_radius(int r) noexcept { return std::size_t{1} << (2 * r + 1); }

}  // namespace hca

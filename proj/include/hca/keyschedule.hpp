#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hca/core.hpp"

namespace hca {

/// Minimum normalized spatial entropy for an acceptable key body.
inline constexpr double kKeyEntropyThreshold = 0.75;

/// Normalized Shannon entropy of the w-bit patterns seen in the L circular
/// overlapping windows of bits: -sum(p log2 p) / w.
double spatial_entropy(std::span<const std::uint8_t> bits, std::size_t window);

/// Window length used for a sequence of n bits: floor(log2 n).
std::size_t entropy_window_for(std::size_t n) noexcept;

/// Raised when a key body does not reach the entropy threshold.
class KeyRejected : public Error {
 public:
  explicit KeyRejected(double entropy);
  double entropy() const noexcept { return entropy_; }

 private:
  double entropy_;
};

/// A key whose body passed the entropy gate.
class ValidatedKey {
 public:
  const Key& key() const noexcept { return key_; }
  double entropy() const noexcept { return entropy_; }
  int radius() const noexcept { return key_.radius(); }

 private:
  friend ValidatedKey validate_key(const Key& k);
  ValidatedKey(Key key, double entropy) : key_(std::move(key)), entropy_(entropy) {}

  Key key_;
  double entropy_;
};

/// Entropy of the key body with w = 2r windows.
double key_entropy(const Key& k);
bool key_acceptable(const Key& k);
/// Throws KeyRejected carrying the computed entropy.
ValidatedKey validate_key(const Key& k);

/// Left-toggle (last bit 0): body followed by its complement. Right-toggle:
/// each body bit followed by its complement.
Rule derive_main_rule(const Key& k);

/// One of the four absolute rules, sharing the key's toggle direction, with
/// table[0] = !main.table[0].
Rule derive_border_rule(const Key& k);

enum class Schedule : std::uint8_t { cipher, decipher };

/// Cipher round t uses the base key rotated left by t; decipher round t by
/// rounds-1-t. The toggle bit rotates with the rest of the key.
Key round_key(const Key& base, std::size_t t, std::size_t rounds, Schedule mode);

/// Text form: hex of the 2^(2r) body bits (bit 0 = MSB of the first digit),
/// ':' and 'L' or 'R' for the last bit.
std::string format_key(const Key& k);
Key parse_key(std::string_view text);

/// Keys from a key file: one per line, '#' starts a comment, blank lines skipped.
std::vector<Key> parse_key_file(std::string_view contents);

}  // namespace hca

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "hca/cipher.hpp"

namespace hca {

enum class CipherMode : std::uint8_t { ecb = 1, cbc = 2, ctr = 3 };

const char* to_string(CipherMode m) noexcept;
CipherMode parse_mode(std::string_view name);

/// Always appends k bytes of value k, 1 <= k <= block_bytes.
std::vector<std::uint8_t> pad(std::span<const std::uint8_t> data, std::size_t block_bytes);
/// Throws FormatError on malformed padding.
std::vector<std::uint8_t> unpad(std::span<const std::uint8_t> data, std::size_t block_bytes);

/// "HCA1" | version 0x01 | mode | block bits (u16 big-endian) | IV (absent
/// for ECB) | payload. ECB and CBC payloads are padded to whole blocks; CTR
/// payloads keep the plaintext length.
struct Container {
  static constexpr std::array<std::uint8_t, 4> kMagic{'H', 'C', 'A', '1'};
  static constexpr std::uint8_t kVersion = 0x01;
  static constexpr std::size_t kHeaderBytes = 8;

  CipherMode mode = CipherMode::ctr;
  std::uint16_t block_bits = 128;
  std::vector<std::uint8_t> iv;
  std::vector<std::uint8_t> payload;

  std::vector<std::uint8_t> serialize() const;
  static Container parse(std::span<const std::uint8_t> bytes);

  friend bool operator==(const Container&, const Container&) = default;
};

/// iv must be block_bytes long for CBC and CTR and is ignored for ECB.
Container encrypt_stream(std::span<const std::uint8_t> data, const BlockCipher& cipher, CipherMode mode,
                         std::span<const std::uint8_t> iv = {});
std::vector<std::uint8_t> decrypt_stream(const Container& c, const BlockCipher& cipher);

/// Counter block for index i: the IV as a big-endian integer plus i, mod 2^N.
std::vector<std::uint8_t> counter_block(std::span<const std::uint8_t> iv, std::uint64_t index);

}  // namespace hca

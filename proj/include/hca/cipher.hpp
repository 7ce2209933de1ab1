#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hca/core.hpp"
#include "hca/keyschedule.hpp"

namespace hca {

struct CipherParams {
  int radius = 4;
  std::size_t block_bits = 128;
  std::size_t rounds = 128;

  /// Block of n bits with as many rounds as cells.
  static CipherParams for_block(std::size_t n, int radius = 4) { return {radius, n, n}; }

  std::size_t border_span() const noexcept { return 2 * static_cast<std::size_t>(radius); }
  std::size_t block_bytes() const noexcept { return block_bits / 8; }

  /// Throws FormatError on an unusable combination.
  void check() const;
  void check_key(const Key& k) const;

  friend bool operator==(const CipherParams&, const CipherParams&) = default;
};

/// T rounds of pre-image calculus (encrypt) or forward evolution (decrypt)
/// for one validated key. The per-round rules are never materialized: both
/// toggle directions reduce the main rule to a lookup into the rotated key.
class BlockCipher {
 public:
  BlockCipher(const ValidatedKey& key, CipherParams params = {});

  const CipherParams& params() const noexcept { return params_; }
  const Key& key() const noexcept { return key_; }

  Lattice encrypt(const Lattice& plain) const;
  Lattice decrypt(const Lattice& cipher) const;

  /// In place on one block of cells (0/1 bytes); scratch holds at least
  /// block_bits + 2r cells.
  void encrypt_cells(std::span<std::uint8_t> cells, std::span<std::uint8_t> scratch) const;
  void decrypt_cells(std::span<std::uint8_t> cells, std::span<std::uint8_t> scratch) const;

  /// In place on one packed block of block_bytes() bytes.
  void encrypt_bytes(std::span<std::uint8_t> block) const;
  void decrypt_bytes(std::span<std::uint8_t> block) const;

 private:
  Key key_;
  CipherParams params_;
  std::vector<std::uint8_t> doubled_;  // key bits twice over; round key t starts at t mod |K|
};

Lattice encrypt_block(const Lattice& plain, const ValidatedKey& key, const CipherParams& params = {});
Lattice decrypt_block(const Lattice& cipher, const ValidatedKey& key, const CipherParams& params = {});

/// Independent packed blocks, processed concurrently with OpenMP. The output
/// is bit-identical to the serial variants for any thread count.
void encrypt_blocks(const BlockCipher& cipher, std::span<std::uint8_t> data);
void decrypt_blocks(const BlockCipher& cipher, std::span<std::uint8_t> data);
void encrypt_blocks_serial(const BlockCipher& cipher, std::span<std::uint8_t> data);
void decrypt_blocks_serial(const BlockCipher& cipher, std::span<std::uint8_t> data);

namespace reference {

/// Literal round loop: rotate the key, derive both rule tables, run the
/// generic engine, rotate the lattice. Slow; kept as the oracle for BlockCipher.
Lattice encrypt_block(const Lattice& plain, const ValidatedKey& key, const CipherParams& params = {});
Lattice decrypt_block(const Lattice& cipher, const ValidatedKey& key, const CipherParams& params = {});

/// One round each, for per-round inverse checks.
Lattice encrypt_round(const Lattice& s, const Key& round_key, int radius);
Lattice decrypt_round(const Lattice& s, const Key& round_key, int radius);

}  // namespace reference

}  // namespace hca

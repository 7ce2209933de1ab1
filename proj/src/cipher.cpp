#include "hca/cipher.hpp"

#include <algorithm>
#include <string>

#include "hca/engine.hpp"

namespace hca {

void CipherParams::check() const {
  if (radius < 1 || radius > 6) throw FormatError("radius must be in 1..6");
  if (block_bits < border_span() + 2) {
    throw FormatError("block of " + std::to_string(block_bits) + " bits is too small for radius " +
                      std::to_string(radius));
  }
  if (rounds < 1) throw FormatError("at least one round is required");
}

void CipherParams::check_key(const Key& k) const {
  if (k.radius() != radius) {
    throw FormatError("key radius " + std::to_string(k.radius()) + " does not match cipher radius " +
                      std::to_string(radius));
  }
}

BlockCipher::BlockCipher(const ValidatedKey& key, CipherParams params)
    : key_(key.key()), params_(params) {
  params_.check();
  params_.check_key(key_);
  const auto bits = key_.bits();
  doubled_.reserve(2 * bits.size());
  doubled_.insert(doubled_.end(), bits.begin(), bits.end());
  doubled_.insert(doubled_.end(), bits.begin(), bits.end());
}

namespace {

// p = preimage of s under the rules of the round key starting at kt.
// kt[j] for j < 2^(2r) is the rule body, kt[2^(2r)] the toggle bit.
void preimage_cells(const std::uint8_t* kt, std::size_t half, std::size_t r, const std::uint8_t* s,
                    std::uint8_t* p, std::size_t n) {
  const std::size_t span = 2 * r;
  const std::uint8_t border_zero = kt[0] ^ 1u;
  if (kt[half] == 0) {
    for (std::size_t i = 0; i < span; ++i) p[(i + n - r) % n] = s[i] ^ border_zero;
    std::size_t known = 0;
    for (std::size_t j = 0; j < span; ++j) known = (known << 1) | p[(n - r + j) % n];
    for (std::size_t i = n - 1; i >= span; --i) {
      const std::uint8_t bit = kt[known] ^ s[i];
      p[i - r] = bit;
      known = (static_cast<std::size_t>(bit) << (span - 1)) | (known >> 1);
    }
  } else {
    for (std::size_t i = 0; i < span; ++i) p[i + r] = s[i] ^ border_zero;
    const std::size_t mask = half - 1;
    std::size_t known = 0;
    for (std::size_t j = 0; j < span; ++j) known = (known << 1) | p[r + j];
    const std::size_t wrap = n - r;
    for (std::size_t i = span; i < wrap; ++i) {
      const std::uint8_t bit = kt[known] ^ s[i];
      p[i + r] = bit;
      known = ((known << 1) | bit) & mask;
    }
    for (std::size_t i = wrap; i < n; ++i) {
      const std::uint8_t bit = kt[known] ^ s[i];
      p[i + r - n] = bit;
      known = ((known << 1) | bit) & mask;
    }
  }
}

// out = forward step of s; ext is scratch for n + 2r cells.
void forward_cells(const std::uint8_t* kt, std::size_t half, std::size_t r, const std::uint8_t* s,
                   std::uint8_t* out, std::size_t n, std::uint8_t* ext) {
  const std::size_t span = 2 * r;
  std::copy(s + n - r, s + n, ext);
  std::copy(s, s + n, ext + r);
  std::copy(s, s + r, ext + r + n);
  const std::uint8_t border_zero = kt[0] ^ 1u;
  const std::size_t mask = 2 * half - 1;
  std::size_t v = 0;
  for (std::size_t j = 0; j < span; ++j) v = (v << 1) | ext[j];
  if (kt[half] == 0) {
    for (std::size_t i = 0; i < span; ++i) out[i] = ext[i] ^ border_zero;
    for (std::size_t i = 0; i < n; ++i) {
      v = ((v << 1) | ext[i + span]) & mask;
      if (i >= span) out[i] = kt[v & (half - 1)] ^ static_cast<std::uint8_t>(v / half);
    }
  } else {
    for (std::size_t i = 0; i < span; ++i) out[i] = ext[i + span] ^ border_zero;
    for (std::size_t i = 0; i < n; ++i) {
      v = ((v << 1) | ext[i + span]) & mask;
      if (i >= span) out[i] = kt[v >> 1] ^ static_cast<std::uint8_t>(v & 1u);
    }
  }
}

}  // namespace

void BlockCipher::encrypt_cells(std::span<std::uint8_t> cells, std::span<std::uint8_t> scratch) const {
  const std::size_t n = params_.block_bits;
  const auto r = static_cast<std::size_t>(params_.radius);
  if (cells.size() != n || scratch.size() < n + 2 * r) throw FormatError("encrypt: block size mismatch");
  const std::size_t len = key_.size();
  const std::size_t half = len - 1;
  const std::size_t shift = 2 * r;
  std::uint8_t* p = scratch.data();
  for (std::size_t t = 0; t < params_.rounds; ++t) {
    const std::uint8_t* kt = doubled_.data() + t % len;
    preimage_cells(kt, half, r, cells.data(), p, n);
    // Shift opposite to this round's toggle direction.
    if (kt[half] == 0) {
      std::rotate_copy(p, p + n - shift, p + n, cells.data());
    } else {
      std::rotate_copy(p, p + shift, p + n, cells.data());
    }
  }
}

void BlockCipher::decrypt_cells(std::span<std::uint8_t> cells, std::span<std::uint8_t> scratch) const {
  const std::size_t n = params_.block_bits;
  const auto r = static_cast<std::size_t>(params_.radius);
  if (cells.size() != n || scratch.size() < 2 * n + 2 * r) throw FormatError("decrypt: block size mismatch");
  const std::size_t len = key_.size();
  const std::size_t half = len - 1;
  const std::size_t shift = 2 * r;
  std::uint8_t* rotated = scratch.data();
  std::uint8_t* ext = scratch.data() + n;
  for (std::size_t t = 0; t < params_.rounds; ++t) {
    const std::uint8_t* kt = doubled_.data() + (params_.rounds - 1 - t) % len;
    if (kt[half] == 0) {
      std::rotate_copy(cells.data(), cells.data() + shift, cells.data() + n, rotated);
    } else {
      std::rotate_copy(cells.data(), cells.data() + n - shift, cells.data() + n, rotated);
    }
    forward_cells(kt, half, r, rotated, cells.data(), n, ext);
  }
}

Lattice BlockCipher::encrypt(const Lattice& plain) const {
  if (plain.size() != params_.block_bits) throw FormatError("encrypt: block size mismatch");
  std::vector<std::uint8_t> cells(plain.cells().begin(), plain.cells().end());
  std::vector<std::uint8_t> scratch(2 * params_.block_bits + params_.border_span());
  encrypt_cells(cells, scratch);
  return Lattice(std::move(cells));
}

Lattice BlockCipher::decrypt(const Lattice& cipher) const {
  if (cipher.size() != params_.block_bits) throw FormatError("decrypt: block size mismatch");
  std::vector<std::uint8_t> cells(cipher.cells().begin(), cipher.cells().end());
  std::vector<std::uint8_t> scratch(2 * params_.block_bits + params_.border_span());
  decrypt_cells(cells, scratch);
  return Lattice(std::move(cells));
}

namespace {

void unpack(std::span<const std::uint8_t> bytes, std::uint8_t* cells) {
  for (std::size_t i = 0; i < bytes.size() * 8; ++i) cells[i] = (bytes[i / 8] >> (7 - i % 8)) & 1u;
}

void pack(const std::uint8_t* cells, std::span<std::uint8_t> bytes) {
  for (std::size_t b = 0; b < bytes.size(); ++b) {
    std::uint8_t v = 0;
    for (std::size_t j = 0; j < 8; ++j) v = static_cast<std::uint8_t>((v << 1) | cells[8 * b + j]);
    bytes[b] = v;
  }
}

template <bool Encrypt>
void process_bytes(const BlockCipher& c, std::span<std::uint8_t> block, std::vector<std::uint8_t>& work) {
  const std::size_t n = c.params().block_bits;
  if (block.size() * 8 != n) throw FormatError("block is not block_bits/8 bytes");
  work.resize(3 * n + c.params().border_span());
  unpack(block, work.data());
  std::span<std::uint8_t> cells(work.data(), n);
  std::span<std::uint8_t> scratch(work.data() + n, work.size() - n);
  if constexpr (Encrypt) {
    c.encrypt_cells(cells, scratch);
  } else {
    c.decrypt_cells(cells, scratch);
  }
  pack(work.data(), block);
}

template <bool Encrypt, bool Parallel>
void process_blocks(const BlockCipher& c, std::span<std::uint8_t> data) {
  const std::size_t bytes = c.params().block_bytes();
  if (c.params().block_bits % 8 != 0) throw FormatError("block size is not a whole number of bytes");
  if (data.size() % bytes != 0) throw FormatError("data is not a whole number of blocks");
  const auto blocks = static_cast<std::ptrdiff_t>(data.size() / bytes);
  if constexpr (Parallel) {
#pragma omp parallel
    {
      std::vector<std::uint8_t> work;
#pragma omp for schedule(static)
      for (std::ptrdiff_t b = 0; b < blocks; ++b) {
        process_bytes<Encrypt>(c, data.subspan(static_cast<std::size_t>(b) * bytes, bytes), work);
      }
    }
  } else {
    std::vector<std::uint8_t> work;
    for (std::ptrdiff_t b = 0; b < blocks; ++b) {
      process_bytes<Encrypt>(c, data.subspan(static_cast<std::size_t>(b) * bytes, bytes), work);
    }
  }
}

}  // namespace

void BlockCipher::encrypt_bytes(std::span<std::uint8_t> block) const {
  std::vector<std::uint8_t> work;
  process_bytes<true>(*this, block, work);
}

void BlockCipher::decrypt_bytes(std::span<std::uint8_t> block) const {
  std::vector<std::uint8_t> work;
  process_bytes<false>(*this, block, work);
}

void encrypt_blocks(const BlockCipher& c, std::span<std::uint8_t> data) { process_blocks<true, true>(c, data); }
void decrypt_blocks(const BlockCipher& c, std::span<std::uint8_t> data) { process_blocks<false, true>(c, data); }
void encrypt_blocks_serial(const BlockCipher& c, std::span<std::uint8_t> data) {
  process_blocks<true, false>(c, data);
}
void decrypt_blocks_serial(const BlockCipher& c, std::span<std::uint8_t> data) {
  process_blocks<false, false>(c, data);
}

Lattice encrypt_block(const Lattice& plain, const ValidatedKey& key, const CipherParams& params) {
  return BlockCipher(key, params).encrypt(plain);
}

Lattice decrypt_block(const Lattice& cipher, const ValidatedKey& key, const CipherParams& params) {
  return BlockCipher(key, params).decrypt(cipher);
}

namespace reference {

namespace {

HybridStepConfig round_config(const Key& round_key, std::size_t cells) {
  return HybridStepConfig::hybrid(derive_main_rule(round_key), derive_border_rule(round_key), cells);
}

}  // namespace

Lattice encrypt_round(const Lattice& s, const Key& round_key, int radius) {
  const auto pre = preimage_step(s, round_config(round_key, s.size()));
  return rotate(pre, 2 * static_cast<std::size_t>(radius), opposite(round_key.direction()));
}

Lattice decrypt_round(const Lattice& s, const Key& round_key, int radius) {
  const auto shifted = rotate(s, 2 * static_cast<std::size_t>(radius), round_key.direction());
  return forward_step(shifted, round_config(round_key, s.size()));
}

Lattice encrypt_block(const Lattice& plain, const ValidatedKey& key, const CipherParams& params) {
  params.check();
  params.check_key(key.key());
  if (plain.size() != params.block_bits) throw FormatError("encrypt: block size mismatch");
  Lattice s = plain;
  for (std::size_t t = 0; t < params.rounds; ++t) {
    s = encrypt_round(s, round_key(key.key(), t, params.rounds, Schedule::cipher), params.radius);
  }
  return s;
}

Lattice decrypt_block(const Lattice& cipher, const ValidatedKey& key, const CipherParams& params) {
  params.check();
  params.check_key(key.key());
  if (cipher.size() != params.block_bits) throw FormatError("decrypt: block size mismatch");
  Lattice s = cipher;
  for (std::size_t t = 0; t < params.rounds; ++t) {
    s = decrypt_round(s, round_key(key.key(), t, params.rounds, Schedule::decipher), params.radius);
  }
  return s;
}

}  // namespace reference

}  // namespace hca

#include "hca/modes.hpp"

#include <algorithm>
#include <cctype>
#include <string>

namespace hca {

const char* to_string(CipherMode m) noexcept {
  switch (m) {
    case CipherMode::ecb: return "ecb";
    case CipherMode::cbc: return "cbc";
    case CipherMode::ctr: return "ctr";
  }
  return "?";
}

CipherMode parse_mode(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "ecb") return CipherMode::ecb;
  if (lower == "cbc") return CipherMode::cbc;
  if (lower == "ctr") return CipherMode::ctr;
  throw FormatError("unknown mode '" + std::string(name) + "' (expected ecb, cbc or ctr)");
}

std::vector<std::uint8_t> pad(std::span<const std::uint8_t> data, std::size_t block_bytes) {
  if (block_bytes == 0 || block_bytes > 255) throw FormatError("pad: block size must be 1..255 bytes");
  const std::size_t k = block_bytes - data.size() % block_bytes;
  std::vector<std::uint8_t> out(data.begin(), data.end());
  out.insert(out.end(), k, static_cast<std::uint8_t>(k));
  return out;
}

std::vector<std::uint8_t> unpad(std::span<const std::uint8_t> data, std::size_t block_bytes) {
  if (data.empty() || data.size() % block_bytes != 0) throw FormatError("bad padding: length");
  const std::size_t k = data.back();
  if (k == 0 || k > block_bytes) throw FormatError("bad padding: value");
  for (std::size_t i = data.size() - k; i < data.size(); ++i) {
    if (data[i] != k) throw FormatError("bad padding: bytes");
  }
  return {data.begin(), data.end() - static_cast<std::ptrdiff_t>(k)};
}

std::vector<std::uint8_t> Container::serialize() const {
  std::vector<std::uint8_t> out(kMagic.begin(), kMagic.end());
  out.push_back(kVersion);
  out.push_back(static_cast<std::uint8_t>(mode));
  out.push_back(static_cast<std::uint8_t>(block_bits >> 8));
  out.push_back(static_cast<std::uint8_t>(block_bits & 0xFF));
  if (mode != CipherMode::ecb) out.insert(out.end(), iv.begin(), iv.end());
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

Container Container::parse(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderBytes) throw FormatError("container truncated: header");
  if (!std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) throw FormatError("bad magic");
  if (bytes[4] != kVersion) throw FormatError("unsupported container version");
  Container c;
  const auto mode = bytes[5];
  if (mode < 1 || mode > 3) throw FormatError("unknown mode byte");
  c.mode = static_cast<CipherMode>(mode);
  c.block_bits = static_cast<std::uint16_t>((bytes[6] << 8) | bytes[7]);
  if (c.block_bits == 0 || c.block_bits % 8 != 0) throw FormatError("block size is not a whole number of bytes");
  const std::size_t block_bytes = c.block_bits / 8u;
  std::size_t pos = kHeaderBytes;
  if (c.mode != CipherMode::ecb) {
    if (bytes.size() < pos + block_bytes) throw FormatError("container truncated: iv");
    c.iv.assign(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                bytes.begin() + static_cast<std::ptrdiff_t>(pos + block_bytes));
    pos += block_bytes;
  }
  c.payload.assign(bytes.begin() + static_cast<std::ptrdiff_t>(pos), bytes.end());
  if (c.mode != CipherMode::ctr && c.payload.size() % block_bytes != 0) {
    throw FormatError("container truncated: payload is not a whole number of blocks");
  }
  return c;
}

std::vector<std::uint8_t> counter_block(std::span<const std::uint8_t> iv, std::uint64_t index) {
  std::vector<std::uint8_t> block(iv.begin(), iv.end());
  unsigned carry = 0;
  for (std::size_t k = 0; k < block.size(); ++k) {
    const std::size_t b = block.size() - 1 - k;
    const unsigned add = k < 8 ? static_cast<unsigned>((index >> (8 * k)) & 0xFFu) : 0u;
    const unsigned sum = block[b] + add + carry;
    block[b] = static_cast<std::uint8_t>(sum & 0xFFu);
    carry = sum >> 8;
  }
  return block;
}

namespace {

void xor_into(std::span<std::uint8_t> dst, std::span<const std::uint8_t> src) {
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] ^= src[i];
}

void check_iv(std::span<const std::uint8_t> iv, std::size_t block_bytes) {
  if (iv.size() != block_bytes) {
    throw FormatError("IV must be " + std::to_string(block_bytes) + " bytes, got " + std::to_string(iv.size()));
  }
}

std::vector<std::uint8_t> ctr_keystream_xor(std::span<const std::uint8_t> data, const BlockCipher& cipher,
                                            std::span<const std::uint8_t> iv) {
  const std::size_t bytes = cipher.params().block_bytes();
  const std::size_t blocks = (data.size() + bytes - 1) / bytes;
  std::vector<std::uint8_t> stream(blocks * bytes);
  for (std::size_t b = 0; b < blocks; ++b) {
    const auto ctr = counter_block(iv, b);
    std::copy(ctr.begin(), ctr.end(), stream.begin() + static_cast<std::ptrdiff_t>(b * bytes));
  }
  encrypt_blocks(cipher, stream);
  std::vector<std::uint8_t> out(data.begin(), data.end());
  xor_into(out, std::span<const std::uint8_t>(stream).first(out.size()));
  return out;
}

}  // namespace

Container encrypt_stream(std::span<const std::uint8_t> data, const BlockCipher& cipher, CipherMode mode,
                         std::span<const std::uint8_t> iv) {
  const auto& params = cipher.params();
  if (params.block_bits % 8 != 0 || params.block_bits > 0xFFFF) throw FormatError("unsupported block size");
  const std::size_t bytes = params.block_bytes();
  Container c;
  c.mode = mode;
  c.block_bits = static_cast<std::uint16_t>(params.block_bits);
  if (mode != CipherMode::ecb) {
    check_iv(iv, bytes);
    c.iv.assign(iv.begin(), iv.end());
  }

  switch (mode) {
    case CipherMode::ecb: {
      c.payload = pad(data, bytes);
      encrypt_blocks(cipher, c.payload);
      break;
    }
    case CipherMode::cbc: {
      c.payload = pad(data, bytes);
      std::vector<std::uint8_t> chain(iv.begin(), iv.end());
      for (std::size_t off = 0; off < c.payload.size(); off += bytes) {
        std::span<std::uint8_t> block(c.payload.data() + off, bytes);
        xor_into(block, chain);
        cipher.encrypt_bytes(block);
        std::copy(block.begin(), block.end(), chain.begin());
      }
      break;
    }
    case CipherMode::ctr: {
      c.payload = ctr_keystream_xor(data, cipher, iv);
      break;
    }
  }
  return c;
}

std::vector<std::uint8_t> decrypt_stream(const Container& c, const BlockCipher& cipher) {
  const auto& params = cipher.params();
  if (c.block_bits != params.block_bits) {
    throw FormatError("container block size " + std::to_string(c.block_bits) + " does not match cipher block size " +
                      std::to_string(params.block_bits));
  }
  const std::size_t bytes = params.block_bytes();
  if (c.mode != CipherMode::ecb) check_iv(c.iv, bytes);

  switch (c.mode) {
    case CipherMode::ecb: {
      if (c.payload.size() % bytes != 0) throw FormatError("payload is not a whole number of blocks");
      auto plain = c.payload;
      decrypt_blocks(cipher, plain);
      return unpad(plain, bytes);
    }
    case CipherMode::cbc: {
      if (c.payload.size() % bytes != 0) throw FormatError("payload is not a whole number of blocks");
      // Block i depends only on ciphertext blocks i-1 and i.
      auto plain = c.payload;
      decrypt_blocks(cipher, plain);
      for (std::size_t off = 0; off < plain.size(); off += bytes) {
        std::span<std::uint8_t> block(plain.data() + off, bytes);
        if (off == 0) {
          xor_into(block, c.iv);
        } else {
          xor_into(block, std::span<const std::uint8_t>(c.payload).subspan(off - bytes, bytes));
        }
      }
      return unpad(plain, bytes);
    }
    case CipherMode::ctr:
      return ctr_keystream_xor(c.payload, cipher, c.iv);
  }
  throw FormatError("unknown mode");
}

}  // namespace hca

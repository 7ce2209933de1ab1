#include "hca/keyschedule.hpp"

#include <bit>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace hca {

double spatial_entropy(std::span<const std::uint8_t> bits, std::size_t window) {
  const std::size_t n = bits.size();
  if (n == 0) throw FormatError("spatial_entropy: empty sequence");
  if (window == 0 || window > n) throw FormatError("spatial_entropy: window must be in 1..length");
  if (window > 24) throw FormatError("spatial_entropy: window too wide");

  std::vector<std::uint32_t> counts(std::size_t{1} << window, 0);
  const std::size_t mask = (std::size_t{1} << window) - 1;
  std::size_t v = 0;
  for (std::size_t j = 0; j < window; ++j) v = (v << 1) | bits[j];
  for (std::size_t i = 0; i < n; ++i) {
    ++counts[v];
    v = ((v << 1) | bits[(i + window) % n]) & mask;
  }

  double h = 0.0;
  const double total = static_cast<double>(n);
  for (auto c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / total;
    h -= p * std::log2(p);
  }
  return h / static_cast<double>(window);
}

std::size_t entropy_window_for(std::size_t n) noexcept {
  return n == 0 ? 0 : static_cast<std::size_t>(std::bit_width(n) - 1);
}

namespace {

std::string rejection_message(double h) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "key rejected: spatial entropy %.3f below %.2f", h, kKeyEntropyThreshold);
  return buf;
}

}  // namespace

KeyRejected::KeyRejected(double entropy) : Error(rejection_message(entropy)), entropy_(entropy) {}

double key_entropy(const Key& k) { return spatial_entropy(k.body(), 2 * static_cast<std::size_t>(k.radius())); }

// Patterns with a (2,1,1) window distribution land exactly on 0.75 and must pass.
bool key_acceptable(const Key& k) { return key_entropy(k) >= kKeyEntropyThreshold - 1e-12; }

ValidatedKey validate_key(const Key& k) {
  const double h = key_entropy(k);
  if (h < kKeyEntropyThreshold - 1e-12) throw KeyRejected(h);
  return ValidatedKey(k, h);
}

Rule derive_main_rule(const Key& k) {
  const auto body = k.body();
  std::vector<std::uint8_t> table(2 * body.size());
  if (k.direction() == Direction::left) {
    for (std::size_t i = 0; i < body.size(); ++i) {
      table[i] = body[i];
      table[i + body.size()] = body[i] ^ 1u;
    }
  } else {
    for (std::size_t i = 0; i < body.size(); ++i) {
      table[2 * i] = body[i];
      table[2 * i + 1] = body[i] ^ 1u;
    }
  }
  return Rule(std::move(table), k.radius(), k.direction());
}

Rule derive_border_rule(const Key& k) {
  const std::size_t half = k.body_size();
  const std::uint8_t first = k[0] ^ 1u;  // main.table[0] == k[0] in both directions
  std::vector<std::uint8_t> table(2 * half);
  if (k.direction() == Direction::left) {
    for (std::size_t i = 0; i < half; ++i) {
      table[i] = first;
      table[i + half] = first ^ 1u;
    }
  } else {
    for (std::size_t i = 0; i < half; ++i) {
      table[2 * i] = first;
      table[2 * i + 1] = first ^ 1u;
    }
  }
  return Rule(std::move(table), k.radius(), k.direction());
}

Key round_key(const Key& base, std::size_t t, std::size_t rounds, Schedule mode) {
  if (t >= rounds) throw FormatError("round index out of range");
  return base.rotated_left(mode == Schedule::cipher ? t : rounds - 1 - t);
}

std::string format_key(const Key& k) {
  return encode_hex(Lattice(std::vector<std::uint8_t>(k.body().begin(), k.body().end()))) + ":" +
         (k.direction() == Direction::left ? "L" : "R");
}

Key parse_key(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  const auto colon = text.find(':');
  if (colon == std::string_view::npos || colon + 2 != text.size()) {
    throw FormatError("key text must look like <hex>:L or <hex>:R");
  }
  const char dir = text[colon + 1];
  if (dir != 'L' && dir != 'R' && dir != 'l' && dir != 'r') throw FormatError("key direction must be L or R");
  const auto body = decode_hex(text.substr(0, colon));
  std::vector<std::uint8_t> bits(body.cells().begin(), body.cells().end());
  bits.push_back(dir == 'R' || dir == 'r' ? 1 : 0);
  return Key(std::move(bits));
}

std::vector<Key> parse_key_file(std::string_view contents) {
  std::vector<Key> keys;
  std::istringstream in{std::string(contents)};
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    keys.push_back(parse_key(line));
  }
  return keys;
}

}  // namespace hca

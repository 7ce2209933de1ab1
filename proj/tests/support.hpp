#pragma once

#include <cstdint>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hca/core.hpp"

namespace hca::test {

inline std::string data_path(const std::string& name) { return std::string(HCA_TEST_DATA_DIR) + "/" + name; }

inline std::vector<std::string> data_lines(const std::string& name) {
  std::ifstream in(data_path(name));
  if (!in) throw std::runtime_error("missing test data: " + name);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line[0] != '#') lines.push_back(line);
  }
  return lines;
}

struct KnownAnswer {
  int radius = 0;
  std::size_t block_bits = 0;
  std::size_t rounds = 0;
  std::string key, plaintext, ciphertext;
};

inline std::vector<KnownAnswer> known_answers() {
  std::vector<KnownAnswer> out;
  for (const auto& line : data_lines("kat_vectors.txt")) {
    std::istringstream row(line);
    KnownAnswer k;
    row >> k.radius >> k.block_bits >> k.rounds >> k.key >> k.plaintext >> k.ciphertext;
    out.push_back(k);
  }
  return out;
}

inline Lattice random_bits(std::mt19937_64& rng, std::size_t n) {
  std::vector<std::uint8_t> v(n);
  for (auto& b : v) b = static_cast<std::uint8_t>(rng() & 1u);
  return Lattice(std::move(v));
}

}  // namespace hca::test

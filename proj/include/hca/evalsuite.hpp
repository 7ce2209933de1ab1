#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "hca/cipher.hpp"
#include "hca/core.hpp"
#include "hca/keyschedule.hpp"

namespace hca {

// Every stream is a std::mt19937_64 seeded through splitmix64 from (seed, index).

std::uint64_t splitmix64(std::uint64_t x) noexcept;
std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream = 0);

Lattice random_lattice(std::mt19937_64& rng, std::size_t n);
/// Redraws until the body passes the entropy gate.
ValidatedKey random_valid_key(std::mt19937_64& rng, int radius = 4);

enum class AvalancheKind : std::uint8_t { plaintext, key };
const char* to_string(AvalancheKind k) noexcept;
AvalancheKind parse_avalanche_kind(std::string_view name);

/// Z = E(p, k) xor E(p', k'), where exactly one of p, k has bit flip_index
/// flipped. With no flip index Z is all zero. Key flips are limited to the
/// rule body; a flipped key that fails validation raises KeyRejected.
Lattice avalanche_trial(const ValidatedKey& k, const Lattice& p, AvalancheKind kind,
                        std::optional<std::size_t> flip_index, const CipherParams& params);

struct AvalancheReport {
  std::size_t n = 0;
  std::size_t trials = 0;
  AvalancheKind kind = AvalancheKind::plaintext;
  double mean_percent = 0.0;
  double sigma = 0.0;  // percentage points
  std::uint64_t seed = 0;
};

struct EntropyStats {
  double min = 0.0;
  double max = 0.0;
  double avg = 0.0;
  double sigma = 0.0;
  std::size_t window = 0;
};

struct AvalancheResult {
  AvalancheReport report;
  EntropyStats entropy;
};

struct AvalancheOptions {
  std::size_t n = 128;
  AvalancheKind kind = AvalancheKind::plaintext;
  std::size_t trials = 0;  // 0 means n * n
  std::uint64_t seed = 1;
  int radius = 4;
  std::size_t rounds = 0;  // 0 means n
};

/// Each trial draws a fresh valid key, a random plaintext and a random flip
/// position from its own stream.
AvalancheResult avalanche_report(const AvalancheOptions& opts);
AvalancheResult avalanche_report_serial(const AvalancheOptions& opts);

std::string format_report(const AvalancheResult& r);
std::string report_csv_header();
std::string report_csv_row(const AvalancheResult& r);

/// P1 drawn from the seed; P_{i+1} = E(P_i); output P_i xor P_{i+1} until
/// total_bytes are produced. total_bytes must be a multiple of the block size.
std::vector<std::uint8_t> nist_sequence(std::uint64_t seed, std::size_t total_bytes, const BlockCipher& cipher);

enum class SequenceFormat : std::uint8_t { raw, ascii };
SequenceFormat parse_sequence_format(std::string_view name);

/// Raw writes the bytes unchanged; ascii writes one '0'/'1' per bit, MSB
/// first, with no separators.
void write_sequence(std::ostream& out, std::span<const std::uint8_t> bytes, SequenceFormat format);

/// MSB first.
std::vector<std::uint8_t> bytes_to_bits(std::span<const std::uint8_t> bytes);
/// '0'/'1' characters; whitespace is skipped.
std::vector<std::uint8_t> ascii_to_bits(std::string_view text);

inline constexpr std::size_t kMinTestBits = 100;

double monobit_test(std::span<const std::uint8_t> bits);
double block_frequency_test(std::span<const std::uint8_t> bits, std::size_t block = 128);
double runs_test(std::span<const std::uint8_t> bits);

inline constexpr double kSignificance = 0.01;

struct SmokeResult {
  double monobit = 0.0;
  double block_frequency = 0.0;
  double runs = 0.0;
  bool passed() const noexcept {
    return monobit >= kSignificance && block_frequency >= kSignificance && runs >= kSignificance;
  }
};

SmokeResult smoke_tests(std::span<const std::uint8_t> bits);

struct CensusResult {
  int radius = 0;
  bool exhaustive = false;
  std::uint64_t patterns_tested = 0;     // distinct 2^(2r)-bit bodies examined
  std::uint64_t patterns_discarded = 0;
  std::uint64_t keys_tested = 0;         // bodies times both toggle directions
  std::uint64_t keys_discarded = 0;

  double discard_percent() const noexcept {
    return keys_tested == 0 ? 0.0 : 100.0 * static_cast<double>(keys_discarded) / static_cast<double>(keys_tested);
  }
};

/// Exhaustive for r <= 2, otherwise `samples` uniform bodies from `seed`.
CensusResult keyspace_census(int radius, std::uint64_t samples = std::uint64_t{1} << 20, std::uint64_t seed = 1);

}  // namespace hca

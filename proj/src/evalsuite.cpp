#include "hca/evalsuite.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

#include <boost/math/special_functions/gamma.hpp>

namespace hca {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(stream)));
}

Lattice random_lattice(std::mt19937_64& rng, std::size_t n) {
  std::vector<std::uint8_t> cells(n);
  std::uint64_t word = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i % 64 == 0) word = rng();
    cells[i] = static_cast<std::uint8_t>((word >> (i % 64)) & 1u);
  }
  return Lattice(std::move(cells));
}

ValidatedKey random_valid_key(std::mt19937_64& rng, int radius) {
  while (true) {
    const auto bits = random_lattice(rng, key_bits_for_radius(radius));
    Key k(std::vector<std::uint8_t>(bits.cells().begin(), bits.cells().end()));
    if (key_acceptable(k)) return validate_key(k);
  }
}

const char* to_string(AvalancheKind k) noexcept { return k == AvalancheKind::plaintext ? "plaintext" : "key"; }

AvalancheKind parse_avalanche_kind(std::string_view name) {
  if (name == "plaintext" || name == "text") return AvalancheKind::plaintext;
  if (name == "key") return AvalancheKind::key;
  throw FormatError("unknown avalanche kind '" + std::string(name) + "' (expected plaintext or key)");
}

Lattice avalanche_trial(const ValidatedKey& k, const Lattice& p, AvalancheKind kind,
                        std::optional<std::size_t> flip_index, const CipherParams& params) {
  const BlockCipher base(k, params);
  const Lattice y = base.encrypt(p);
  if (!flip_index) return xor_lattices(y, base.encrypt(p));

  if (kind == AvalancheKind::plaintext) {
    if (*flip_index >= p.size()) throw FormatError("plaintext flip index out of range");
    return xor_lattices(y, base.encrypt(p.with_flipped(*flip_index)));
  }
  if (*flip_index >= k.key().body_size()) throw FormatError("key flip index outside the rule body");
  const BlockCipher flipped(validate_key(k.key().with_flipped(*flip_index)), params);
  return xor_lattices(y, flipped.encrypt(p));
}

namespace {

struct TrialOutcome {
  double percent;
  double entropy;
};

TrialOutcome run_trial(const AvalancheOptions& o, const CipherParams& params, std::size_t window,
                       std::size_t index) {
  auto rng = make_rng(o.seed, index);
  while (true) {
    const auto key = random_valid_key(rng, o.radius);
    const auto plain = random_lattice(rng, o.n);
    const std::size_t range = o.kind == AvalancheKind::plaintext ? o.n : key.key().body_size();
    const std::size_t flip = std::uniform_int_distribution<std::size_t>(0, range - 1)(rng);
    if (o.kind == AvalancheKind::key && !key_acceptable(key.key().with_flipped(flip))) continue;
    const auto z = avalanche_trial(key, plain, o.kind, flip, params);
    return {100.0 * ones_fraction(z), spatial_entropy(z.cells(), window)};
  }
}

AvalancheOptions normalized(AvalancheOptions o) {
  if (o.trials == 0) o.trials = o.n * o.n;
  if (o.rounds == 0) o.rounds = o.n;
  return o;
}

AvalancheResult summarize(const AvalancheOptions& o, std::size_t window, const std::vector<TrialOutcome>& out) {
  AvalancheResult r;
  r.report.n = o.n;
  r.report.trials = o.trials;
  r.report.kind = o.kind;
  r.report.seed = o.seed;
  r.entropy.window = window;
  if (out.empty()) return r;

  const double count = static_cast<double>(out.size());
  double sum = 0.0;
  double ent_sum = 0.0;
  r.entropy.min = out.front().entropy;
  r.entropy.max = out.front().entropy;
  for (const auto& t : out) {
    sum += t.percent;
    ent_sum += t.entropy;
    r.entropy.min = std::min(r.entropy.min, t.entropy);
    r.entropy.max = std::max(r.entropy.max, t.entropy);
  }
  r.report.mean_percent = sum / count;
  r.entropy.avg = ent_sum / count;
  double var = 0.0;
  double ent_var = 0.0;
  for (const auto& t : out) {
    var += (t.percent - r.report.mean_percent) * (t.percent - r.report.mean_percent);
    ent_var += (t.entropy - r.entropy.avg) * (t.entropy - r.entropy.avg);
  }
  r.report.sigma = std::sqrt(var / count);
  r.entropy.sigma = std::sqrt(ent_var / count);
  return r;
}

template <bool Parallel>
AvalancheResult avalanche_impl(AvalancheOptions o) {
  o = normalized(o);
  const CipherParams params{o.radius, o.n, o.rounds};
  params.check();
  const std::size_t window = entropy_window_for(o.n);
  std::vector<TrialOutcome> out(o.trials);
  const auto trials = static_cast<std::ptrdiff_t>(o.trials);
  if constexpr (Parallel) {
#pragma omp parallel for schedule(dynamic, 64)
    for (std::ptrdiff_t i = 0; i < trials; ++i) {
      out[static_cast<std::size_t>(i)] = run_trial(o, params, window, static_cast<std::size_t>(i));
    }
  } else {
    for (std::ptrdiff_t i = 0; i < trials; ++i) {
      out[static_cast<std::size_t>(i)] = run_trial(o, params, window, static_cast<std::size_t>(i));
    }
  }
  return summarize(o, window, out);
}

}  // namespace

AvalancheResult avalanche_report(const AvalancheOptions& opts) { return avalanche_impl<true>(opts); }
AvalancheResult avalanche_report_serial(const AvalancheOptions& opts) { return avalanche_impl<false>(opts); }

std::string format_report(const AvalancheResult& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "avalanche kind=%s N=%zu trials=%zu seed=%llu\n"
                "  flipped bits: mean %.3f%%  sigma %.3f\n"
                "  entropy (w=%zu): min %.3f  max %.3f  avg %.3f  sigma %.3f\n",
                to_string(r.report.kind), r.report.n, r.report.trials,
                static_cast<unsigned long long>(r.report.seed), r.report.mean_percent, r.report.sigma,
                r.entropy.window, r.entropy.min, r.entropy.max, r.entropy.avg, r.entropy.sigma);
  return buf;
}

std::string report_csv_header() { return "kind,N,trials,mean,sigma,ent_min,ent_max,ent_avg,ent_sigma"; }

std::string report_csv_row(const AvalancheResult& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s,%zu,%zu,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f", to_string(r.report.kind), r.report.n,
                r.report.trials, r.report.mean_percent, r.report.sigma, r.entropy.min, r.entropy.max,
                r.entropy.avg, r.entropy.sigma);
  return buf;
}

std::vector<std::uint8_t> nist_sequence(std::uint64_t seed, std::size_t total_bytes, const BlockCipher& cipher) {
  const std::size_t bytes = cipher.params().block_bytes();
  if (cipher.params().block_bits % 8 != 0 || total_bytes % bytes != 0) {
    throw FormatError("sequence length must be a whole number of blocks");
  }
  auto rng = make_rng(seed);
  std::vector<std::uint8_t> current = random_lattice(rng, cipher.params().block_bits).to_bytes();
  std::vector<std::uint8_t> next(bytes);
  std::vector<std::uint8_t> out;
  out.reserve(total_bytes);
  while (out.size() < total_bytes) {
    std::copy(current.begin(), current.end(), next.begin());
    cipher.encrypt_bytes(next);
    for (std::size_t i = 0; i < bytes; ++i) out.push_back(current[i] ^ next[i]);
    current.swap(next);
  }
  return out;
}

SequenceFormat parse_sequence_format(std::string_view name) {
  if (name == "raw") return SequenceFormat::raw;
  if (name == "ascii") return SequenceFormat::ascii;
  throw FormatError("unknown sequence format '" + std::string(name) + "' (expected raw or ascii)");
}

void write_sequence(std::ostream& out, std::span<const std::uint8_t> bytes, SequenceFormat format) {
  if (format == SequenceFormat::raw) {
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    return;
  }
  std::string line(8, '0');
  for (auto b : bytes) {
    for (int i = 0; i < 8; ++i) line[i] = static_cast<char>('0' + ((b >> (7 - i)) & 1));
    out << line;
  }
}

std::vector<std::uint8_t> bytes_to_bits(std::span<const std::uint8_t> bytes) {
  std::vector<std::uint8_t> bits(bytes.size() * 8);
  for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = (bytes[i / 8] >> (7 - i % 8)) & 1u;
  return bits;
}

std::vector<std::uint8_t> ascii_to_bits(std::string_view text) {
  std::vector<std::uint8_t> bits;
  bits.reserve(text.size());
  for (char c : text) {
    if (c == '0' || c == '1') {
      bits.push_back(static_cast<std::uint8_t>(c - '0'));
    } else if (c != ' ' && c != '\n' && c != '\r' && c != '\t') {
      throw FormatError("ascii bit stream may only contain '0' and '1'");
    }
  }
  return bits;
}

namespace {

void require_length(std::span<const std::uint8_t> bits) {
  if (bits.size() < kMinTestBits) {
    throw FormatError("statistical tests need at least " + std::to_string(kMinTestBits) + " bits");
  }
}

}  // namespace

double monobit_test(std::span<const std::uint8_t> bits) {
  require_length(bits);
  long long sum = 0;
  for (auto b : bits) sum += b ? 1 : -1;
  const double s_obs = std::fabs(static_cast<double>(sum)) / std::sqrt(static_cast<double>(bits.size()));
  return std::erfc(s_obs / std::sqrt(2.0));
}

double block_frequency_test(std::span<const std::uint8_t> bits, std::size_t block) {
  require_length(bits);
  if (block == 0 || block > bits.size()) throw FormatError("block length must be in 1..n");
  const std::size_t blocks = bits.size() / block;
  double chi2 = 0.0;
  for (std::size_t b = 0; b < blocks; ++b) {
    const auto first = bits.begin() + static_cast<std::ptrdiff_t>(b * block);
    const auto ones = std::accumulate(first, first + static_cast<std::ptrdiff_t>(block), 0.0);
    const double pi = ones / static_cast<double>(block) - 0.5;
    chi2 += pi * pi;
  }
  chi2 *= 4.0 * static_cast<double>(block);
  return boost::math::gamma_q(static_cast<double>(blocks) / 2.0, chi2 / 2.0);
}

double runs_test(std::span<const std::uint8_t> bits) {
  require_length(bits);
  const double n = static_cast<double>(bits.size());
  const double pi = std::accumulate(bits.begin(), bits.end(), 0.0) / n;
  // Frequency prerequisite: the runs statistic is meaningless on a biased stream.
  if (std::fabs(pi - 0.5) >= 2.0 / std::sqrt(n)) return 0.0;
  std::size_t runs = 1;
  for (std::size_t k = 0; k + 1 < bits.size(); ++k) runs += bits[k] != bits[k + 1];
  const double expected = 2.0 * n * pi * (1.0 - pi);
  const double num = std::fabs(static_cast<double>(runs) - expected);
  const double den = 2.0 * std::sqrt(2.0 * n) * pi * (1.0 - pi);
  return std::erfc(num / den);
}

SmokeResult smoke_tests(std::span<const std::uint8_t> bits) {
  return {monobit_test(bits), block_frequency_test(bits), runs_test(bits)};
}

CensusResult keyspace_census(int radius, std::uint64_t samples, std::uint64_t seed) {
  if (radius < 1 || radius > 4) throw FormatError("census radius must be in 1..4");
  const std::size_t body = std::size_t{1} << (2 * radius);
  const std::size_t window = 2 * static_cast<std::size_t>(radius);
  CensusResult c;
  c.radius = radius;
  c.exhaustive = radius <= 2;
  c.patterns_tested = c.exhaustive ? (std::uint64_t{1} << body) : samples;

  const auto total = static_cast<std::int64_t>(c.patterns_tested);
  std::uint64_t discarded = 0;
#pragma omp parallel reduction(+ : discarded)
  {
    std::vector<std::uint8_t> bits(body);
#pragma omp for schedule(static)
    for (std::int64_t x = 0; x < total; ++x) {
      if (c.exhaustive) {
        for (std::size_t i = 0; i < body; ++i) bits[i] = static_cast<std::uint8_t>((x >> (body - 1 - i)) & 1);
      } else {
        auto rng = make_rng(seed, static_cast<std::uint64_t>(x));
        const auto l = random_lattice(rng, body);
        std::copy(l.cells().begin(), l.cells().end(), bits.begin());
      }
      // A body's entropy covers both toggle directions.
      if (spatial_entropy(bits, window) < kKeyEntropyThreshold - 1e-12) ++discarded;
    }
  }
  c.patterns_discarded = discarded;
  c.keys_tested = 2 * c.patterns_tested;
  c.keys_discarded = 2 * c.patterns_discarded;
  return c;
}

}  // namespace hca

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hca/evalsuite.hpp"
#include "hca/graph.hpp"
#include "hca/modes.hpp"

namespace fs = std::filesystem;
using namespace hca;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitCrypto = 2;
constexpr const char* kKeyEnv = "HCA_KEY";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::uint8_t> read_all(const std::string& path) {
  if (path == "-") {
    return {std::istreambuf_iterator<char>(std::cin >> std::noskipws), {}};
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), {}};
}

// Output lands under a temporary name and is renamed into place once complete.
template <class Writer>
void write_atomically(const std::string& path, Writer&& write) {
  if (path == "-") {
    write(std::cout);
    std::cout.flush();
    return;
  }
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp" + std::to_string(std::random_device{}());
  try {
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw UsageError("cannot write '" + path + "'");
      write(out);
      out.flush();
      if (!out) throw UsageError("write to '" + path + "' failed");
    }
    fs::rename(tmp, target);
  } catch (...) {
    std::error_code ec;
    fs::remove(tmp, ec);
    throw;
  }
}

void write_bytes(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  write_atomically(path, [&](std::ostream& out) {
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  });
}

Key load_key(const std::string& key_file) {
  std::string text;
  if (!key_file.empty()) {
    const auto bytes = read_all(key_file);
    text.assign(bytes.begin(), bytes.end());
  } else if (const char* env = std::getenv(kKeyEnv)) {
    text = env;
  } else {
    throw UsageError(std::string("no key: pass --key-file or set ") + kKeyEnv);
  }
  const auto keys = parse_key_file(text);
  if (keys.empty()) throw FormatError("key source holds no key");
  return keys.front();
}

std::vector<std::uint8_t> random_bytes(std::size_t n) {
  std::random_device rd;
  std::vector<std::uint8_t> v(n);
  for (auto& b : v) b = static_cast<std::uint8_t>(rd());
  return v;
}

Rule parse_rule(const std::string& text) {
  if (!text.empty() && text.size() <= 3 && text.find_first_not_of("0123456789") == std::string::npos) {
    return Rule::elementary(static_cast<unsigned>(std::stoul(text)));
  }
  return Rule::from_bits(text);
}

std::string entropy_text(double h) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", h);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid cellular automaton block cipher toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "hca 1.0");

  // keygen
  auto* keygen = app.add_subcommand("keygen", "Print a random key that passes validation");
  int keygen_radius = 4;
  std::uint64_t keygen_seed = 0;
  std::string keygen_out = "-";
  keygen->add_option("--radius", keygen_radius, "Neighborhood radius")->check(CLI::Range(1, 6));
  auto* keygen_seed_opt = keygen->add_option("--seed", keygen_seed, "Deterministic seed");
  keygen->add_option("--out", keygen_out, "Output key file ('-' for stdout)");

  // validate
  auto* validate = app.add_subcommand("validate", "Check a key against the entropy threshold");
  std::string validate_key_file;
  validate->add_option("-k,--key,--key-file", validate_key_file, "Key file (default: $HCA_KEY)");

  // encrypt / decrypt
  std::string enc_key_file, enc_in = "-", enc_out = "-", enc_mode = "ctr", enc_iv;
  std::size_t enc_block_bits = 128, enc_rounds = 0;
  auto* encrypt = app.add_subcommand("encrypt", "Encrypt a file into a container");
  encrypt->add_option("-k,--key,--key-file", enc_key_file, "Key file (default: $HCA_KEY)");
  encrypt->add_option("--in", enc_in, "Input file ('-' for stdin)");
  encrypt->add_option("--out", enc_out, "Output file ('-' for stdout)");
  encrypt->add_option("--mode", enc_mode, "ecb, cbc or ctr");
  encrypt->add_option("--iv", enc_iv, "IV in hex (default: random)");
  encrypt->add_option("--block-bits", enc_block_bits, "Block size in bits");
  encrypt->add_option("--rounds", enc_rounds, "Rounds (default: block size)");

  std::string dec_key_file, dec_in = "-", dec_out = "-";
  std::size_t dec_rounds = 0;
  auto* decrypt = app.add_subcommand("decrypt", "Decrypt a container");
  decrypt->add_option("-k,--key,--key-file", dec_key_file, "Key file (default: $HCA_KEY)");
  decrypt->add_option("--in", dec_in, "Input container ('-' for stdin)");
  decrypt->add_option("--out", dec_out, "Output file ('-' for stdout)");
  decrypt->add_option("--rounds", dec_rounds, "Rounds (default: block size)");

  // avalanche
  AvalancheOptions av;
  std::string av_kind = "plaintext";
  bool av_csv = false;
  auto* avalanche = app.add_subcommand("avalanche", "Measure the avalanche effect");
  avalanche->add_option("--n", av.n, "Block size in bits");
  avalanche->add_option("--kind", av_kind, "plaintext or key");
  avalanche->add_option("--trials", av.trials, "Trials (default: n*n)");
  avalanche->add_option("--seed", av.seed, "Seed");
  avalanche->add_option("--radius", av.radius, "Neighborhood radius")->check(CLI::Range(1, 6));
  avalanche->add_option("--rounds", av.rounds, "Rounds (default: n)");
  avalanche->add_flag("--csv", av_csv, "Print a comma-separated row with header");

  // census
  int census_radius = 1;
  std::uint64_t census_samples = std::uint64_t{1} << 20, census_seed = 1;
  auto* census = app.add_subcommand("census", "Fraction of key bodies rejected by validation");
  census->add_option("--radius", census_radius, "Neighborhood radius")->check(CLI::Range(1, 6));
  census->add_option("--samples", census_samples, "Samples when the space is too large to enumerate");
  census->add_option("--seed", census_seed, "Sampling seed");

  // nistgen
  std::size_t gen_bytes = 0, gen_block_bits = 128;
  std::uint64_t gen_seed = 1;
  std::string gen_key_file, gen_format = "raw", gen_out = "-";
  auto* nistgen = app.add_subcommand("nistgen", "Generate a test sequence by chained encryption");
  nistgen->add_option("--bytes", gen_bytes, "Sequence length in bytes")->required();
  nistgen->add_option("--seed", gen_seed, "Seed of the first block");
  nistgen->add_option("-k,--key,--key-file", gen_key_file, "Key file (default: $HCA_KEY)");
  nistgen->add_option("--format", gen_format, "raw or ascii");
  nistgen->add_option("--out", gen_out, "Output file ('-' for stdout)");
  nistgen->add_option("--block-bits", gen_block_bits, "Block size in bits");

  // smoketest
  std::string smoke_in = "-", smoke_format = "raw";
  auto* smoketest = app.add_subcommand("smoketest", "Frequency, block-frequency and runs tests on a sequence");
  smoketest->add_option("--in", smoke_in, "Sequence file ('-' for stdin)");
  smoketest->add_option("--format", smoke_format, "raw or ascii");

  // graph
  std::string graph_rule, graph_border, graph_dot, graph_input;
  auto* graph = app.add_subcommand("graph", "Backward-step transducer of a small toggle rule pair");
  graph->add_option("--rule", graph_rule, "Main rule: elementary number or bit table")->required();
  graph->add_option("--border", graph_border, "Border rule: elementary number or bit table")->required();
  graph->add_option("--dot", graph_dot, "Write the DOT graph here ('-' for stdout)");
  graph->add_option("--input", graph_input, "Lattice bits to run through the machine");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*keygen) {
      std::mt19937_64 rng = *keygen_seed_opt ? make_rng(keygen_seed) : make_rng(std::random_device{}());
      const auto k = random_valid_key(rng, keygen_radius);
      write_atomically(keygen_out, [&](std::ostream& out) {
        out << "# h=" << entropy_text(k.entropy()) << "\n" << format_key(k.key()) << "\n";
      });
    } else if (*validate) {
      const auto k = load_key(validate_key_file);
      const double h = key_entropy(k);
      const bool ok = key_acceptable(k);
      std::cout << "h=" << entropy_text(h) << " " << (ok ? "accepted" : "rejected") << " (radius " << k.radius()
                << ", " << to_string(k.direction()) << "-toggle)\n";
      return ok ? kExitOk : kExitCrypto;
    } else if (*encrypt) {
      const auto key = validate_key(load_key(enc_key_file));
      const CipherParams params{key.radius(), enc_block_bits, enc_rounds == 0 ? enc_block_bits : enc_rounds};
      if (enc_block_bits % 8 != 0) throw UsageError("--block-bits must be a multiple of 8");
      const BlockCipher cipher(key, params);
      const auto mode = parse_mode(enc_mode);
      std::vector<std::uint8_t> iv;
      if (mode != CipherMode::ecb) {
        iv = enc_iv.empty() ? random_bytes(params.block_bytes()) : decode_hex(enc_iv, enc_block_bits).to_bytes();
      }
      const auto data = read_all(enc_in);
      write_bytes(enc_out, encrypt_stream(data, cipher, mode, iv).serialize());
    } else if (*decrypt) {
      const auto key = validate_key(load_key(dec_key_file));
      const auto container = Container::parse(read_all(dec_in));
      const std::size_t n = container.block_bits;
      const BlockCipher cipher(key, CipherParams{key.radius(), n, dec_rounds == 0 ? n : dec_rounds});
      write_bytes(dec_out, decrypt_stream(container, cipher));
    } else if (*avalanche) {
      av.kind = parse_avalanche_kind(av_kind);
      const auto r = avalanche_report(av);
      if (av_csv) {
        std::cout << report_csv_header() << "\n" << report_csv_row(r) << "\n";
      } else {
        std::cout << format_report(r);
      }
    } else if (*census) {
      const auto r = keyspace_census(census_radius, census_samples, census_seed);
      char pct[32];
      std::snprintf(pct, sizeof pct, "%.2f", r.discard_percent());
      std::cout << "radius: " << r.radius << "\n"
                << "method: " << (r.exhaustive ? "exhaustive" : "sampled") << "\n"
                << "bodies tested: " << r.patterns_tested << "\n"
                << "bodies discarded: " << r.patterns_discarded << "\n"
                << "keys tested: " << r.keys_tested << "\n"
                << "keys discarded: " << r.keys_discarded << "\n"
                << "discarded: " << pct << "%\n";
    } else if (*nistgen) {
      const auto key = validate_key(load_key(gen_key_file));
      const auto format = parse_sequence_format(gen_format);
      const BlockCipher cipher(key, CipherParams{key.radius(), gen_block_bits, gen_block_bits});
      const auto seq = nist_sequence(gen_seed, gen_bytes, cipher);
      write_atomically(gen_out, [&](std::ostream& out) { write_sequence(out, seq, format); });
    } else if (*smoketest) {
      const auto raw = read_all(smoke_in);
      const auto bits = parse_sequence_format(smoke_format) == SequenceFormat::raw
                            ? bytes_to_bits(raw)
                            : ascii_to_bits(std::string_view(reinterpret_cast<const char*>(raw.data()), raw.size()));
      const auto r = smoke_tests(bits);
      auto line = [](const char* name, double p) {
        std::printf("%-16s p=%.6f %s\n", name, p, p >= kSignificance ? "pass" : "FAIL");
      };
      std::printf("bits: %zu\n", bits.size());
      line("monobit", r.monobit);
      line("block-frequency", r.block_frequency);
      line("runs", r.runs);
      return r.passed() ? kExitOk : kExitCrypto;
    } else if (*graph) {
      const auto t = build_backward_transducer(parse_rule(graph_rule), parse_rule(graph_border));
      std::cout << "radius: " << t.radius() << ", " << to_string(t.direction()) << "-toggle\n"
                << "states: " << t.states().size() << " (" << t.main_count() << " main)\n";
      if (t.main_count() <= kHamiltonianMaxVertices) {
        const auto cycles = hamiltonian_cycles(t);
        std::cout << "hamiltonian cycles: " << cycles.size() << "\n";
        for (const auto& c : cycles) std::cout << "  " << format_cycle(c) << "\n";
      }
      if (!graph_input.empty()) {
        const auto s = Lattice::from_bits(graph_input);
        const auto run_result = run(t, transducer_input(t, s));
        std::cout << "path:";
        for (auto st : run_result.path) std::cout << " " << t.states()[st].name;
        std::cout << "\npre-image: " << replay_preimage(t, s).to_bits() << "\n";
      }
      if (!graph_dot.empty()) {
        const auto dot = export_dot(t);
        write_atomically(graph_dot, [&](std::ostream& out) { out << dot; });
      }
    }
  } catch (const KeyRejected& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCrypto;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCrypto;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitOk;
}

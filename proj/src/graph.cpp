#include "hca/graph.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "hca/engine.hpp"

namespace hca {

Transducer build_backward_transducer(const Rule& main, const Rule& border) {
  if (main.radius() > kTransducerMaxRadius) {
    throw FormatError("transducer construction is limited to radius " + std::to_string(kTransducerMaxRadius));
  }
  const auto cfg = HybridStepConfig::hybrid(main, border, 2 * static_cast<std::size_t>(main.radius()) + 2);
  const Direction dir = cfg.direction();
  const auto r = static_cast<std::size_t>(main.radius());
  const std::size_t span = 2 * r;
  const std::size_t contexts = std::size_t{1} << span;
  const std::size_t tree = 2 * contexts - 1;  // s states
  const std::uint8_t border_zero = border[0];

  Transducer t;
  t.radius_ = main.radius();
  t.direction_ = dir;
  t.first_main_ = tree;
  t.states_.resize(tree + 2 * contexts);

  auto q_index = [&](std::size_t x, std::size_t w) {
    return dir == Direction::left ? (x << span) | w : (w << 1) | x;
  };

  for (std::size_t k = 0; k < tree; ++k) {
    auto& s = t.states_[k];
    s.name = "s" + std::to_string(k);
    if (k > 0) s.output = static_cast<std::uint8_t>((k - 1) & 1u);
    const bool leaf = k >= contexts - 1;
    for (std::uint8_t x = 0; x < 2; ++x) {
      if (leaf) {
        s.next[x] = tree + q_index(x, k - (contexts - 1));
      } else {
        s.next[x] = 2 * k + 1 + (x ^ border_zero);
      }
    }
  }

  for (std::size_t i = 0; i < 2 * contexts; ++i) {
    auto& q = t.states_[tree + i];
    q.name = "q" + std::to_string(i);
    q.main = true;
    const std::size_t x = dir == Direction::left ? i >> span : i & 1u;
    const std::size_t w = dir == Direction::left ? i & (contexts - 1) : i >> 1;
    const std::uint8_t u = main[dir == Direction::left ? w : w << 1] ^ static_cast<std::uint8_t>(x);
    q.output = u;
    const std::size_t next_w = dir == Direction::left ? (static_cast<std::size_t>(u) << (span - 1)) | (w >> 1)
                                                      : ((w << 1) | u) & (contexts - 1);
    for (std::size_t y = 0; y < 2; ++y) q.next[y] = tree + q_index(y, next_w);
  }
  return t;
}

TransducerRun run(const Transducer& t, std::string_view input) {
  if (t.empty()) throw FormatError("empty transducer");
  TransducerRun out;
  std::size_t state = t.initial();
  out.path.push_back(state);
  for (char c : input) {
    if (c != '0' && c != '1') throw FormatError("transducer input must be '0'/'1'");
    state = t.states()[state].next[static_cast<std::size_t>(c - '0')];
    out.path.push_back(state);
    if (const auto o = t.states()[state].output) out.output.push_back(static_cast<char>('0' + *o));
  }
  return out;
}

std::vector<std::size_t> consumption_order(std::size_t n, int radius, Direction d) {
  const auto span = 2 * static_cast<std::size_t>(radius);
  if (n < span + 2) throw FormatError("lattice too small for the transducer");
  std::vector<std::size_t> order;
  order.reserve(n);
  for (std::size_t i = 0; i < span; ++i) order.push_back(i);
  if (d == Direction::left) {
    for (std::size_t i = n - 1; i >= span; --i) order.push_back(i);
  } else {
    for (std::size_t i = span; i < n; ++i) order.push_back(i);
  }
  return order;
}

std::vector<std::size_t> emission_positions(std::size_t n, int radius, Direction d) {
  const auto r = static_cast<std::size_t>(radius);
  auto order = consumption_order(n, radius, d);
  for (auto& i : order) i = d == Direction::left ? (i + n - r) % n : (i + r) % n;
  return order;
}

std::string transducer_input(const Transducer& t, const Lattice& s) {
  std::string in;
  for (auto i : consumption_order(s.size(), t.radius(), t.direction())) in.push_back(static_cast<char>('0' + s[i]));
  return in;
}

Lattice replay_preimage(const Transducer& t, const Lattice& s) {
  if (t.empty()) throw FormatError("empty transducer");
  const auto result = run(t, transducer_input(t, s));
  const auto positions = emission_positions(s.size(), t.radius(), t.direction());
  std::vector<std::uint8_t> cells(s.size());
  for (std::size_t k = 0; k < positions.size(); ++k) {
    cells[positions[k]] = static_cast<std::uint8_t>(result.output[k] - '0');
  }
  return Lattice(std::move(cells));
}

std::string export_dot(const Transducer& t) {
  if (t.empty()) throw FormatError("cannot export an empty transducer");
  std::ostringstream out;
  out << "digraph transducer {\n";
  out << "  rankdir=LR;\n";
  out << "  node [shape=circle];\n";
  out << "  start [shape=point];\n";
  out << "  start -> " << t.states()[t.initial()].name << ";\n";
  for (const auto& s : t.states()) {
    out << "  " << s.name << " [label=\"" << s.name << "/" << (s.output ? char('0' + *s.output) : 'e') << "\"";
    if (s.main) out << ", shape=doublecircle";
    out << "];\n";
  }
  for (const auto& s : t.states()) {
    for (std::size_t x = 0; x < 2; ++x) {
      out << "  " << s.name << " -> " << t.states()[s.next[x]].name << " [label=\"" << x << "\"];\n";
    }
  }
  out << "}\n";
  return out.str();
}

Digraph complete_digraph(std::size_t n) {
  Digraph g{n, std::vector<std::vector<std::size_t>>(n)};
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (a != b) g.successors[a].push_back(b);
    }
  }
  return g;
}

Digraph main_state_graph(const Transducer& t) {
  if (t.empty()) throw FormatError("empty transducer");
  Digraph g{t.main_count(), std::vector<std::vector<std::size_t>>(t.main_count())};
  for (std::size_t i = 0; i < t.main_count(); ++i) {
    for (auto next : t.states()[t.first_main() + i].next) g.successors[i].push_back(next - t.first_main());
  }
  return g;
}

std::vector<std::vector<std::size_t>> hamiltonian_cycles(const Digraph& g) {
  if (g.vertices > kHamiltonianMaxVertices) {
    throw FormatError("Hamiltonian enumeration is limited to " + std::to_string(kHamiltonianMaxVertices) +
                      " vertices");
  }
  std::vector<std::vector<std::size_t>> cycles;
  if (g.vertices == 0) return cycles;

  // Parallel edges would list the same cycle twice.
  std::vector<std::vector<std::size_t>> adj = g.successors;
  for (auto& a : adj) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }

  std::vector<std::size_t> path{0};
  std::vector<bool> used(g.vertices, false);
  used[0] = true;
  std::function<void(std::size_t)> extend = [&](std::size_t v) {
    if (path.size() == g.vertices) {
      if (std::find(adj[v].begin(), adj[v].end(), 0) != adj[v].end()) {
        if (g.vertices > 1 || v == 0) cycles.push_back(path);
      }
      return;
    }
    for (auto w : adj[v]) {
      if (used[w]) continue;
      used[w] = true;
      path.push_back(w);
      extend(w);
      path.pop_back();
      used[w] = false;
    }
  };
  extend(0);
  return cycles;
}

std::vector<std::vector<std::size_t>> hamiltonian_cycles(const Transducer& t) {
  return hamiltonian_cycles(main_state_graph(t));
}

std::string format_cycle(const std::vector<std::size_t>& cycle, char prefix) {
  std::string s = "(";
  for (auto v : cycle) s += std::string(1, prefix) + std::to_string(v) + ", ";
  if (!cycle.empty()) s += std::string(1, prefix) + std::to_string(cycle.front());
  return s + ")";
}

}  // namespace hca

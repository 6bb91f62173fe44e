#pragma once

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "hmmq/generator.hpp"

namespace testgen {

enum class Kind { Unifilar, Retrodictive, Nonunifilar, Any };

inline const char* to_string(Kind k) {
  switch (k) {
    case Kind::Unifilar: return "unifilar";
    case Kind::Retrodictive: return "retrodictive";
    case Kind::Nonunifilar: return "non-unifilar";
    default: return "any";
  }
}

// Random irreducible generator. A Hamiltonian cycle guarantees irreducibility;
// extra edges respect the requested structure:
//   Unifilar     - at most one edge per (from, symbol)
//   Retrodictive - at most one edge per (to, symbol)
//   Nonunifilar  - at least one (from, symbol) pair with two targets
// Edge weights are bounded away from zero so no transition is negligible.
inline hmmq::GeneratorSpec random_spec(std::mt19937_64& rng, int states, int symbols,
                                       Kind kind, double density = 0.5) {
  std::uniform_int_distribution<int> pick_state(0, states - 1);
  std::uniform_int_distribution<int> pick_symbol(0, symbols - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::set<std::tuple<int, int, int>> edges;  // from, to, symbol
  std::set<std::pair<int, int>> from_sym, to_sym;
  auto admissible = [&](int f, int t, int x) {
    if (edges.count({f, t, x})) return false;
    if (kind == Kind::Unifilar && from_sym.count({f, x})) return false;
    if (kind == Kind::Retrodictive && to_sym.count({t, x})) return false;
    return true;
  };
  auto add = [&](int f, int t, int x) {
    edges.insert({f, t, x});
    from_sym.insert({f, x});
    to_sym.insert({t, x});
  };

  std::vector<int> order(static_cast<std::size_t>(states));
  for (int i = 0; i < states; ++i) order[static_cast<std::size_t>(i)] = i;
  std::shuffle(order.begin(), order.end(), rng);
  for (int i = 0; i < states; ++i) {
    add(order[static_cast<std::size_t>(i)],
        order[static_cast<std::size_t>((i + 1) % states)], pick_symbol(rng));
  }
  if (kind == Kind::Nonunifilar && states > 1) {
    // Duplicate symbol from one state towards a second target.
    const auto [f, t, x] = *edges.begin();
    int other = t;
    while (other == t) other = pick_state(rng);
    if (!edges.count({f, other, x})) add(f, other, x);
  }
  const int attempts = static_cast<int>(density * states * states * symbols) + 1;
  for (int a = 0; a < attempts; ++a) {
    const int f = pick_state(rng), t = pick_state(rng), x = pick_symbol(rng);
    if (admissible(f, t, x)) add(f, t, x);
  }

  hmmq::GeneratorSpec spec;
  for (int i = 0; i < states; ++i) spec.states.push_back("q" + std::to_string(i));
  for (int x = 0; x < symbols; ++x) spec.alphabet.push_back(std::string(1, static_cast<char>('a' + x)));
  for (int f = 0; f < states; ++f) {
    std::vector<std::pair<int, int>> out;
    for (const auto& [ef, et, ex] : edges)
      if (ef == f) out.push_back({et, ex});
    std::vector<double> w;
    double total = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) {
      w.push_back(0.1 + unit(rng));
      total += w.back();
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) {
      const double p = i + 1 == out.size() ? 1.0 - acc : w[i] / total;
      acc += p;
      spec.transitions.push_back({spec.states[static_cast<std::size_t>(f)],
                                  spec.states[static_cast<std::size_t>(out[i].first)],
                                  spec.alphabet[static_cast<std::size_t>(out[i].second)], p});
    }
  }
  return spec;
}

// Structural classification straight from the edge list.
inline bool spec_retrodictive(const hmmq::GeneratorSpec& spec) {
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& t : spec.transitions)
    if (!seen.insert({t.to, t.symbol}).second) return false;
  return true;
}

inline bool spec_unifilar(const hmmq::GeneratorSpec& spec) {
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& t : spec.transitions)
    if (!seen.insert({t.from, t.symbol}).second) return false;
  return true;
}

// The fixed mixed suite: sizes 1..5 states, 1..3 symbols, kinds rotated.
struct SuiteEntry {
  hmmq::GeneratorSpec spec;
  Kind kind;
};

inline std::vector<SuiteEntry> mixed_suite(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> states(1, 5), symbols(1, 3);
  const Kind kinds[] = {Kind::Unifilar, Kind::Retrodictive, Kind::Nonunifilar, Kind::Any};
  std::vector<SuiteEntry> out;
  for (std::size_t i = 0; i < count; ++i) {
    const Kind kind = kinds[i % 4];
    int n = states(rng), m = symbols(rng);
    if (kind == Kind::Nonunifilar) n = std::max(n, 2);
    out.push_back({random_spec(rng, n, m, kind), kind});
  }
  return out;
}

}  // namespace testgen

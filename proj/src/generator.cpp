#include "hmmq/generator.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <tuple>
#include <unordered_map>

#include <Eigen/SparseLU>

#include "hmmq/errors.hpp"
#include "hmmq/linalg.hpp"

namespace hmmq {

namespace {

std::unordered_map<std::string, int> index_labels(
    const std::vector<std::string>& labels, const char* what) {
  if (labels.empty()) {
    throw SpecFormatError(std::string("empty ") + what + " list");
  }
  std::unordered_map<std::string, int> index;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!index.emplace(labels[i], static_cast<int>(i)).second) {
      throw SpecFormatError(std::string("duplicate ") + what + " '" +
                            labels[i] + "'");
    }
  }
  return index;
}

// Every state reaches every other iff state 0 reaches all states along the
// support digraph and along its reverse.
bool strongly_connected(const std::vector<std::vector<Edge>>& out, int n) {
  auto reaches_all = [n](const std::vector<std::vector<int>>& adj) {
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
      const int s = stack.back();
      stack.pop_back();
      for (int t : adj[static_cast<std::size_t>(s)]) {
        if (!seen[static_cast<std::size_t>(t)]) {
          seen[static_cast<std::size_t>(t)] = 1;
          ++count;
          stack.push_back(t);
        }
      }
    }
    return count == n;
  };
  std::vector<std::vector<int>> fwd(static_cast<std::size_t>(n)),
      bwd(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s) {
    for (const Edge& e : out[static_cast<std::size_t>(s)]) {
      fwd[static_cast<std::size_t>(s)].push_back(e.to);
      bwd[static_cast<std::size_t>(e.to)].push_back(s);
    }
  }
  return reaches_all(fwd) && reaches_all(bwd);
}

// Kernel of (T - I) with the first equation replaced by normalisation.
Eigen::VectorXd solve_stationary(const Eigen::SparseMatrix<double>& total) {
  const Eigen::Index n = total.rows();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(total.nonZeros() + 2 * n));
  for (Eigen::Index col = 0; col < total.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(total, col); it; ++it) {
      if (it.row() != 0) trip.emplace_back(it.row(), it.col(), it.value());
    }
  }
  for (Eigen::Index i = 1; i < n; ++i) trip.emplace_back(i, i, -1.0);
  for (Eigen::Index j = 0; j < n; ++j) trip.emplace_back(0, j, 1.0);
  Eigen::SparseMatrix<double> system(n, n);
  system.setFromTriplets(trip.begin(), trip.end());
  system.makeCompressed();

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(system);
  if (lu.info() != Eigen::Success) {
    throw ConsistencyError("stationary distribution solve failed");
  }
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs(0) = 1.0;
  Eigen::VectorXd pi = lu.solve(rhs);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (pi(i) < 0.0) {
      if (pi(i) < -1e-14) {
        throw ConsistencyError("stationary distribution has negative entry " +
                               std::to_string(pi(i)));
      }
      pi(i) = 0.0;
    }
  }
  pi /= pi.sum();
  const double residual = (total * pi - pi).cwiseAbs().maxCoeff();
  if (residual > 1e-10) {
    throw ConsistencyError("stationarity residual " + std::to_string(residual));
  }
  return pi;
}

}  // namespace

Eigen::SparseMatrix<double> Generator::total_transition() const {
  Eigen::SparseMatrix<double> total(num_states(), num_states());
  for (const auto& t : tensor_) total += t;
  return total;
}

int Generator::state_index(const std::string& label) const {
  const auto it = std::find(spec_.states.begin(), spec_.states.end(), label);
  if (it == spec_.states.end()) throw AlphabetError("unknown state '" + label + "'");
  return static_cast<int>(it - spec_.states.begin());
}

int Generator::symbol_index(const std::string& symbol) const {
  const auto it =
      std::find(spec_.alphabet.begin(), spec_.alphabet.end(), symbol);
  if (it == spec_.alphabet.end()) {
    throw AlphabetError("unknown symbol '" + symbol + "'");
  }
  return static_cast<int>(it - spec_.alphabet.begin());
}

Generator validate_spec(const GeneratorSpec& spec) {
  const auto state_of = index_labels(spec.states, "state");
  const auto symbol_of = index_labels(spec.alphabet, "symbol");
  const int n = static_cast<int>(spec.states.size());
  const int m = static_cast<int>(spec.alphabet.size());

  Generator gen;
  gen.spec_ = spec;
  gen.out_.assign(static_cast<std::size_t>(n), {});
  std::set<std::tuple<int, int, int>> seen;
  std::vector<std::vector<Eigen::Triplet<double>>> trip(
      static_cast<std::size_t>(m));
  for (const Transition& t : spec.transitions) {
    const auto from = state_of.find(t.from);
    const auto to = state_of.find(t.to);
    const auto sym = symbol_of.find(t.symbol);
    if (from == state_of.end() || to == state_of.end()) {
      throw AlphabetError("transition references unknown state '" +
                          (from == state_of.end() ? t.from : t.to) + "'");
    }
    if (sym == symbol_of.end()) {
      throw AlphabetError("transition references unknown symbol '" +
                          t.symbol + "'");
    }
    if (!std::isfinite(t.p) || t.p <= 0.0 || t.p > 1.0) {
      throw SpecFormatError("probability of " + t.from + " -> " + t.to +
                            " on '" + t.symbol + "' must lie in (0, 1]");
    }
    if (!seen.emplace(from->second, to->second, sym->second).second) {
      throw SpecFormatError("duplicate transition " + t.from + " -> " + t.to +
                            " on '" + t.symbol + "'");
    }
    gen.out_[static_cast<std::size_t>(from->second)].push_back(
        Edge{to->second, sym->second, t.p});
    trip[static_cast<std::size_t>(sym->second)].emplace_back(
        to->second, from->second, t.p);
  }

  for (int s = 0; s < n; ++s) {
    double total = 0.0;
    for (const Edge& e : gen.out_[static_cast<std::size_t>(s)]) total += e.p;
    if (std::abs(total - 1.0) > kRowSumTol) {
      throw RowSumError("outgoing probabilities of state '" +
                        spec.states[static_cast<std::size_t>(s)] +
                        "' sum to " + std::to_string(total));
    }
  }
  if (!strongly_connected(gen.out_, n)) {
    throw ReducibilityError("transition graph is not strongly connected");
  }

  gen.tensor_.resize(static_cast<std::size_t>(m));
  for (int x = 0; x < m; ++x) {
    auto& t = gen.tensor_[static_cast<std::size_t>(x)];
    t.resize(n, n);
    t.setFromTriplets(trip[static_cast<std::size_t>(x)].begin(),
                      trip[static_cast<std::size_t>(x)].end());
    t.makeCompressed();
  }
  gen.stationary_ = solve_stationary(gen.total_transition());
  gen.unifilar_ = is_unifilar(gen);
  gen.retrodictive_ = is_retrodictive(gen);
  return gen;
}

Word make_word(const Generator& gen, const std::vector<std::string>& symbols) {
  Word w;
  w.symbols.reserve(symbols.size());
  for (const auto& s : symbols) w.symbols.push_back(gen.symbol_index(s));
  return w;
}

double word_probability(const Generator& gen, const Word& word) {
  Eigen::VectorXd mass = gen.stationary();
  for (int x : word.symbols) {
    if (x < 0 || x >= gen.num_symbols()) {
      throw AlphabetError("symbol index " + std::to_string(x) +
                          " outside alphabet");
    }
    mass = gen.transition(x) * mass;
  }
  return std::clamp(mass.sum(), 0.0, 1.0);
}

Eigen::VectorXd conditional_word_probabilities(const Generator& gen,
                                               const Word& word) {
  Eigen::VectorXd f = Eigen::VectorXd::Ones(gen.num_states());
  for (auto it = word.symbols.rbegin(); it != word.symbols.rend(); ++it) {
    if (*it < 0 || *it >= gen.num_symbols()) {
      throw AlphabetError("symbol index " + std::to_string(*it) +
                          " outside alphabet");
    }
    f = gen.transition(*it).transpose() * f;
  }
  return f;
}

bool is_unifilar(const Generator& gen) {
  for (int s = 0; s < gen.num_states(); ++s) {
    std::vector<int> per_symbol(static_cast<std::size_t>(gen.num_symbols()), 0);
    for (const Edge& e : gen.out_edges(s)) {
      if (++per_symbol[static_cast<std::size_t>(e.symbol)] > 1) return false;
    }
  }
  return true;
}

bool is_retrodictive(const Generator& gen) {
  // T^x is column-major with rows as end states, so count sources per row.
  for (int x = 0; x < gen.num_symbols(); ++x) {
    std::vector<int> sources(static_cast<std::size_t>(gen.num_states()), 0);
    const auto& t = gen.transition(x);
    for (Eigen::Index col = 0; col < t.outerSize(); ++col) {
      for (Eigen::SparseMatrix<double>::InnerIterator it(t, col); it; ++it) {
        if (++sources[static_cast<std::size_t>(it.row())] > 1) return false;
      }
    }
  }
  return true;
}

std::vector<std::vector<int>> morph_equivalence_classes(const Generator& gen) {
  const int n = gen.num_states();
  std::vector<std::vector<int>> classes(1);
  classes[0].resize(static_cast<std::size_t>(n));
  std::iota(classes[0].begin(), classes[0].end(), 0);

  auto refine = [&](const Eigen::VectorXd& f) {
    std::vector<std::vector<int>> next;
    for (auto& cls : classes) {
      if (cls.size() == 1) {
        next.push_back(std::move(cls));
        continue;
      }
      std::sort(cls.begin(), cls.end(),
                [&](int a, int b) { return f(a) < f(b); });
      std::vector<int> current{cls.front()};
      for (std::size_t i = 1; i < cls.size(); ++i) {
        if (f(cls[i]) - f(cls[i - 1]) > kMorphTol) {
          next.push_back(std::move(current));
          current.clear();
        }
        current.push_back(cls[i]);
      }
      next.push_back(std::move(current));
    }
    classes = std::move(next);
  };
  auto all_singletons = [&] {
    return classes.size() == static_cast<std::size_t>(n);
  };

  // Breadth-first over words; a functional dependent on earlier ones has
  // dependent extensions, so only independent ones are expanded.
  std::vector<Eigen::VectorXd> basis;
  std::deque<std::pair<Eigen::VectorXd, int>> queue;
  Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
  basis.push_back(ones / ones.norm());
  queue.emplace_back(ones, 0);
  while (!queue.empty() && !all_singletons()) {
    auto [f, depth] = std::move(queue.front());
    queue.pop_front();
    if (depth >= n) continue;
    for (int x = 0; x < gen.num_symbols(); ++x) {
      Eigen::VectorXd g = gen.transition(x).transpose() * f;
      refine(g);
      Eigen::VectorXd r = g;
      for (const auto& q : basis) r -= q * q.dot(r);
      for (const auto& q : basis) r -= q * q.dot(r);
      if (r.cwiseAbs().maxCoeff() > 1e-11 &&
          basis.size() < static_cast<std::size_t>(n)) {
        basis.push_back(r / r.norm());
        queue.emplace_back(std::move(g), depth + 1);
      }
    }
  }
  for (auto& cls : classes) std::sort(cls.begin(), cls.end());
  std::sort(classes.begin(), classes.end());
  return classes;
}

Generator merge_equivalent_states(const Generator& gen) {
  const auto classes = morph_equivalence_classes(gen);
  if (classes.size() == static_cast<std::size_t>(gen.num_states())) return gen;

  std::vector<int> class_of(static_cast<std::size_t>(gen.num_states()));
  for (std::size_t c = 0; c < classes.size(); ++c)
    for (int s : classes[c]) class_of[static_cast<std::size_t>(s)] = static_cast<int>(c);

  const auto& pi = gen.stationary();
  const auto& labels = gen.spec().states;
  GeneratorSpec merged;
  merged.alphabet = gen.spec().alphabet;
  for (const auto& cls : classes) {
    merged.states.push_back(labels[static_cast<std::size_t>(cls.front())]);
  }
  for (std::size_t c = 0; c < classes.size(); ++c) {
    double weight = 0.0;
    for (int s : classes[c]) weight += pi(s);
    std::map<std::pair<int, int>, double> lumped;  // (to class, symbol)
    for (int s : classes[c]) {
      for (const Edge& e : gen.out_edges(s)) {
        lumped[{class_of[static_cast<std::size_t>(e.to)], e.symbol}] +=
            pi(s) / weight * e.p;
      }
    }
    for (const auto& [key, p] : lumped) {
      merged.transitions.push_back(
          Transition{merged.states[c],
                     merged.states[static_cast<std::size_t>(key.first)],
                     merged.alphabet[static_cast<std::size_t>(key.second)],
                     std::min(p, 1.0)});
    }
  }
  return validate_spec(merged);
}

double entropy_rate_unifilar(const Generator& gen) {
  if (!gen.unifilar()) {
    throw NotUnifilarError("exact entropy rate requires a unifilar generator");
  }
  double h = 0.0;
  std::vector<double> emit(static_cast<std::size_t>(gen.num_symbols()));
  for (int s = 0; s < gen.num_states(); ++s) {
    std::fill(emit.begin(), emit.end(), 0.0);
    for (const Edge& e : gen.out_edges(s)) emit[static_cast<std::size_t>(e.symbol)] += e.p;
    h += gen.stationary()(s) * shannon_bits(emit);
  }
  return h;
}

namespace {

void block_entropy_dfs(const Generator& gen, const Eigen::VectorXd& mass,
                       int depth, int length, std::vector<double>& entropy) {
  const double p = mass.sum();
  if (p > kEntropyFloor) entropy[static_cast<std::size_t>(depth)] -= p * std::log2(p);
  if (depth == length || p <= 0.0) return;
  for (int x = 0; x < gen.num_symbols(); ++x) {
    block_entropy_dfs(gen, gen.transition(x) * mass, depth + 1, length, entropy);
  }
}

// H(X_{0:l}) for l = 0..length in one traversal.
std::vector<double> block_entropies(const Generator& gen, int length) {
  std::vector<double> entropy(static_cast<std::size_t>(length) + 1, 0.0);
  block_entropy_dfs(gen, gen.stationary(), 0, length, entropy);
  return entropy;
}

void check_budget(const Generator& gen, int length, double budget) {
  if (length < 0 || length > 16) {
    throw ResourceError("block length must lie in [0, 16], got " +
                        std::to_string(length));
  }
  const double words = std::pow(static_cast<double>(gen.num_symbols()), length);
  if (words > budget) {
    throw ResourceError(std::to_string(gen.num_symbols()) + "^" +
                        std::to_string(length) + " words exceed budget " +
                        std::to_string(budget));
  }
}

}  // namespace

double block_entropy(const Generator& gen, int length) {
  check_budget(gen, length, kDefaultWordBudget);
  return block_entropies(gen, length).back();
}

double entropy_rate_estimate(const Generator& gen, int max_length,
                             double word_budget) {
  if (max_length < 1) {
    throw ResourceError("entropy rate estimate needs L_max >= 1");
  }
  check_budget(gen, max_length, word_budget);
  const auto h = block_entropies(gen, max_length);
  return h[static_cast<std::size_t>(max_length)] -
         h[static_cast<std::size_t>(max_length) - 1];
}

int affordable_block_length(const Generator& gen, double word_budget) {
  int length = 1;
  while (length < 16 &&
         std::pow(static_cast<double>(gen.num_symbols()), length + 1) <=
             word_budget) {
    ++length;
  }
  return length;
}

}  // namespace hmmq

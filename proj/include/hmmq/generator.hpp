#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace hmmq {

/// Row-stochasticity tolerance for accepted specs.
inline constexpr double kRowSumTol = 1e-12;
/// Per-word tolerance when deciding future-morph equivalence.
inline constexpr double kMorphTol = 1e-9;

struct Transition {
  std::string from;
  std::string to;
  std::string symbol;
  double p = 0.0;
};

/// Unvalidated description of an edge-emitting HMM.
struct GeneratorSpec {
  std::vector<std::string> states;
  std::vector<std::string> alphabet;
  std::vector<Transition> transitions;
};

/// A finite sequence of symbol indices into a generator's alphabet.
struct Word {
  std::vector<int> symbols;

  std::size_t size() const { return symbols.size(); }
  bool empty() const { return symbols.empty(); }
  friend bool operator==(const Word&, const Word&) = default;
};

/// Outgoing edge in index form.
struct Edge {
  int to;
  int symbol;
  double p;
};

/// A validated, irreducible edge-emitting HMM.
///
/// transition(x) is the |S| x |S| matrix T^x with entry (s', s) equal to the
/// probability of moving from s to s' while emitting x.
class Generator {
 public:
  const GeneratorSpec& spec() const { return spec_; }
  int num_states() const { return static_cast<int>(spec_.states.size()); }
  int num_symbols() const { return static_cast<int>(spec_.alphabet.size()); }

  const Eigen::SparseMatrix<double>& transition(int symbol) const {
    return tensor_[static_cast<std::size_t>(symbol)];
  }
  /// T = sum_x T^x.
  Eigen::SparseMatrix<double> total_transition() const;
  const std::vector<Edge>& out_edges(int state) const {
    return out_[static_cast<std::size_t>(state)];
  }
  const Eigen::VectorXd& stationary() const { return stationary_; }

  bool unifilar() const { return unifilar_; }
  bool retrodictive() const { return retrodictive_; }

  int state_index(const std::string& label) const;
  int symbol_index(const std::string& symbol) const;

 private:
  friend Generator validate_spec(const GeneratorSpec& spec);

  GeneratorSpec spec_;
  std::vector<Eigen::SparseMatrix<double>> tensor_;
  std::vector<std::vector<Edge>> out_;
  Eigen::VectorXd stationary_;
  bool unifilar_ = false;
  bool retrodictive_ = false;
};

/// Validates a spec and builds the generator, including its stationary
/// distribution and classification flags.
///
/// Throws SpecFormatError (duplicates, non-positive probabilities),
/// AlphabetError (unknown state or symbol), RowSumError and ReducibilityError.
Generator validate_spec(const GeneratorSpec& spec);

/// Converts symbol labels into a Word; throws AlphabetError on a foreign
/// symbol.
Word make_word(const Generator& gen, const std::vector<std::string>& symbols);

/// Stationary probability P(w) of emitting the word w.
double word_probability(const Generator& gen, const Word& word);

/// Vector over start states of P(w | S_0 = s).
Eigen::VectorXd conditional_word_probabilities(const Generator& gen,
                                               const Word& word);

bool is_unifilar(const Generator& gen);
bool is_retrodictive(const Generator& gen);

/// Merges states with identical future morphs, to kMorphTol per word.
///
/// Equivalence is decided on the span of word functionals s -> P(w|s) over
/// all words up to length |S|, enumerated breadth first and pruned once a
/// functional is linearly dependent on earlier ones. Each class keeps the
/// label of its first member; its outgoing transitions are the
/// stationary-weighted mixture of its members' transitions, lumped by class.
/// Returns the input unchanged when no two states are equivalent.
Generator merge_equivalent_states(const Generator& gen);

/// Partition of state indices into future-morph equivalence classes.
std::vector<std::vector<int>> morph_equivalence_classes(const Generator& gen);

/// sum_s pi(s) H(P(X|s)) in bits; throws NotUnifilarError otherwise.
double entropy_rate_unifilar(const Generator& gen);

/// Shannon entropy H(X_{0:L}) of length-L blocks, from exact word
/// probabilities.
double block_entropy(const Generator& gen, int length);

/// Default cap on |X|^L for block enumeration.
inline constexpr double kDefaultWordBudget = 1 << 22;

/// H(X_{0:L}) - H(X_{0:L-1}). This converges to h_mu from above and is
/// non-increasing in L. Throws ResourceError when |X|^L exceeds the budget or
/// L is outside [1, 16].
double entropy_rate_estimate(const Generator& gen, int max_length,
                             double word_budget = kDefaultWordBudget);

/// Largest L <= 16 whose block enumeration fits the budget.
int affordable_block_length(const Generator& gen,
                            double word_budget = kDefaultWordBudget);

/// Visits every word of the given length with its probability, depth first.
template <typename Visit>
void for_each_word(const Generator& gen, int length, Visit&& visit);

}  // namespace hmmq

#include "hmmq/detail/word_enum.hpp"

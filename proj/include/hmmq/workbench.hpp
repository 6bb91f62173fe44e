#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hmmq/classical.hpp"
#include "hmmq/generator.hpp"
#include "hmmq/quantum.hpp"

namespace hmmq {

enum class EncodingChoice { EndState, Phase };

EncodingChoice parse_encoding(const std::string& name);
std::string to_string(EncodingChoice choice);
EncodingScheme make_encoding(EncodingChoice choice);

/// Slack on W + h_mu when h_mu is a block-entropy estimate.
inline constexpr double kIpslEstimateSlack = 0.02;
/// Threshold separating a strict advantage from none.
inline constexpr double kAdvantageTol = 1e-6;
inline constexpr double kMemoryBoundTol = 1e-9;
/// Word budget for the entropy-rate estimate of non-unifilar generators.
inline constexpr double kAnalysisWordBudget = 1 << 18;

struct AnalysisOptions {
  EncodingChoice encoding = EncodingChoice::EndState;
  bool merge = true;
  /// Block length for the entropy-rate estimate; auto when absent.
  std::optional<int> block_length;
};

struct TheoremChecks {
  bool memory_bound = false;         // C_q <= C_c and D_q <= D_c
  bool advantage_iff_nonretro = false;
  bool sign_agreement = false;       // sign(C_c - C_q) == sign(W_c - W_q)
  bool ipsl_classical = false;
  bool ipsl_quantum = false;

  bool all() const {
    return memory_bound && advantage_iff_nonretro && sign_agreement &&
           ipsl_classical && ipsl_quantum;
  }
};

struct AnalysisBundle {
  std::string id;
  int input_states = 0;
  int num_states = 0;
  int num_symbols = 0;
  bool unifilar = false;
  bool retrodictive = false;
  EncodingChoice encoding = EncodingChoice::EndState;
  ClassicalReport classical;
  QuantumReport quantum;
  double h_mu = 0.0;
  bool h_mu_exact = false;
  int h_mu_block_length = 0;
  double classical_dissipation = 0.0;
  double quantum_dissipation = 0.0;
  TheoremChecks checks;
};

/// Merge (optional), classical and quantum costs, entropy rate and theorem
/// checks, all derived from the numbers stored in the bundle.
AnalysisBundle analyze(const Generator& gen, const AnalysisOptions& options = {},
                       std::string id = {});

/// Theorem checks recomputed from a bundle's own numbers.
TheoremChecks evaluate_checks(const AnalysisBundle& b);

/// Rounds to 12 significant digits for serialisation.
double round_sig12(double v);

nlohmann::json bundle_to_json(const AnalysisBundle& b,
                              std::optional<double> temperature_kelvin = {});
std::string bundle_to_text(const AnalysisBundle& b);

/// Complex matrix as row-major nested arrays of [re, im] pairs.
nlohmann::json matrix_to_json(const Eigen::MatrixXcd& m);

// ---------------------------------------------------------------------------

struct Table1Entry {
  std::string name;
  double value = 0.0;
  std::optional<double> reference;
};

inline constexpr double kTable1Tol = 0.005;
/// Above this truncation B's overlaps come from the renewal recursion rather
/// than the generic fixed point, which slows down sharply as p -> 1.
inline constexpr std::size_t kTable1FixedPointLimit = 1000;

struct Table1Result {
  double p = 0.5;
  std::size_t truncation = 0;
  double h_mu = 0.0;
  std::vector<Table1Entry> entries;
  /// Reference comparison, only made at p = 1/2.
  bool matches_reference = true;
  /// Orderings and identities that must hold at any p.
  bool consistent = true;

  double value(const std::string& name) const;
  bool ok() const { return matches_reference && consistent; }
};

/// Classical and quantum costs of generators A, B and C. A and C use the
/// end-state encoding; B uses zero phases, which gives the renewal quantum
/// states.
Table1Result table1(double p = 0.5, std::optional<std::size_t> truncation = {});

nlohmann::json table1_to_json(const Table1Result& t);
std::string table1_to_text(const Table1Result& t);

// ---------------------------------------------------------------------------

struct SweepRow {
  double p = 0.0;
  double C_cA = 0, C_qA = 0, C_cB = 0, C_qB = 0, C_cC = 0, C_qC = 0;
  double W_cA = 0, W_qA = 0, W_cB = 0, W_qB = 0, W_cC = 0, W_qC = 0;
  double h_mu = 0.0;
};

/// p_min, p_min + step, ... up to p_max (inclusive within step/2).
std::vector<double> sweep_grid(double p_min, double p_max, double step);

/// Evaluates each p independently; B's quantum memory uses the closed-form
/// renewal overlaps. Rows come back ordered as the input grid.
std::vector<SweepRow> sweep(const std::vector<double>& ps,
                            const std::string& generators = "ABC",
                            unsigned jobs = 1);

std::string sweep_to_csv(const std::vector<SweepRow>& rows,
                         const std::string& generators = "ABC");

// ---------------------------------------------------------------------------

struct VerifyOptions {
  int max_length = 6;
  std::size_t samples = 20000;
  std::uint64_t seed = 1;
  EncodingChoice encoding = EncodingChoice::EndState;
};

struct SampledWord {
  Word word;
  double exact = 0.0;
  double quantum_frequency = 0.0;
  double classical_frequency = 0.0;
  double standard_error = 0.0;
};

struct VerifyReport {
  int num_states = 0;
  int memory_dimension = 0;
  double max_exact_deviation = 0.0;      // channel vs word probabilities
  double channel_definition_error = 0.0;
  int sampled_length = 0;
  std::vector<SampledWord> sampled;
  double max_quantum_z = 0.0;
  double max_classical_z = 0.0;

  bool ok() const {
    return max_exact_deviation < kChannelTol &&
           channel_definition_error < kChannelTol && max_quantum_z < 5.0 &&
           max_classical_z < 5.0;
  }
};

/// Cross-checks the quantum channel against exact word probabilities for
/// all words up to max_length, and against independent sampled runs of the
/// channel and of the classical generator.
VerifyReport verify(const Generator& gen, const VerifyOptions& options);

nlohmann::json verify_to_json(const Generator& gen, const VerifyReport& r);
std::string verify_to_text(const Generator& gen, const VerifyReport& r);

/// Max |P_channel(w) - P(w)| over all words of lengths 1..max_length.
double channel_word_deviation(const Generator& gen, const Embedding& emb,
                              const Isometry& iso, int max_length);

}  // namespace hmmq

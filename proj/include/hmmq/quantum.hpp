#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "hmmq/generator.hpp"
#include "hmmq/linalg.hpp"

namespace hmmq {

/// Orthonormality tolerance for auxiliary encodings.
inline constexpr double kEncodingTol = 1e-10;
/// Entrywise tolerance for isometry and channel checks.
inline constexpr double kChannelTol = 1e-9;

/// Auxiliary-register imprint psi(s, s', x) of a transition. For each fixed
/// (s, x) the vectors over possible end states s' must be orthonormal.
class EncodingScheme {
 public:
  enum class Mode { EndStateLabel, PhaseOnly, Custom };
  using AuxMap =
      std::function<Eigen::VectorXcd(int from, int to, int symbol)>;

  /// psi(s, s', x) = |s'>.
  static EncodingScheme end_state_label();
  /// psi(s, s', x) = exp(i phases(s, x)), a one-dimensional register.
  /// An empty matrix means all phases are zero. Unifilar generators only.
  static EncodingScheme phase_only(Eigen::MatrixXd phases = {});
  static EncodingScheme custom(int aux_dimension, AuxMap map);

  Mode mode() const { return mode_; }
  int aux_dimension(const Generator& gen) const;
  Eigen::VectorXcd aux_state(const Generator& gen, int from, int to,
                             int symbol) const;

  /// Throws EncodingError when the orthonormality condition fails or the
  /// mode is inadmissible for the generator.
  void validate(const Generator& gen) const;

 private:
  EncodingScheme() = default;

  Mode mode_ = Mode::EndStateLabel;
  Eigen::MatrixXd phases_;
  int aux_dim_ = 0;
  AuxMap map_;
};

/// Overlaps c_jk = <sigma_j|sigma_k> of the quantum memory states.
struct GramMatrix {
  Eigen::MatrixXcd entries;

  Eigen::Index size() const { return entries.rows(); }
  cplx operator()(Eigen::Index j, Eigen::Index k) const { return entries(j, k); }
};

struct OverlapSolverOptions {
  double tolerance = 1e-12;
  long max_iterations = 100000;
};

/// Solves c_jk = sum_{j'k'x} sqrt(T^x_{j'j} T^x_{k'k})
///               <psi(j,j',x)|psi(k,k',x)> c_{j'k'}.
///
/// The end-state encoding closes in one evaluation. Other encodings iterate
/// synchronously from the all-ones matrix until the largest entry change
/// drops below the tolerance; ConvergenceError when the cap is hit.
GramMatrix solve_overlaps(const Generator& gen, const EncodingScheme& enc,
                          const OverlapSolverOptions& options = {});

/// rho_G = diag(sqrt(pi)) C diag(sqrt(pi)); shares its spectrum with the
/// stationary memory state.
Eigen::MatrixXcd stationary_gram(const GramMatrix& gram,
                                 const Eigen::VectorXd& pi);

struct QuantumMemory {
  double D = 0.0;
  double C = 0.0;
  int rank = 0;
  Eigen::VectorXd spectrum;  // descending
};

QuantumMemory quantum_memory(const GramMatrix& gram, const Eigen::VectorXd& pi);

/// Columns are the memory states |sigma_s> in an orthonormal basis of their
/// span: a rank x |S| matrix A with A^dagger A = gram.
struct Embedding {
  Eigen::MatrixXcd vectors;

  int dimension() const { return static_cast<int>(vectors.rows()); }
  int num_states() const { return static_cast<int>(vectors.cols()); }
};

Embedding embed_states(const GramMatrix& gram);

/// Stationary memory state sum_s pi(s) |sigma_s><sigma_s|.
Eigen::MatrixXcd stationary_memory_state(const Embedding& emb,
                                         const Eigen::VectorXd& pi);

/// Isometry V from memory into memory (x) output (x) auxiliary. Row index of
/// (m, x, a) is (m * num_symbols + x) * aux_dim + a.
struct Isometry {
  Eigen::MatrixXcd matrix;
  int memory_dim = 0;
  int num_symbols = 0;
  int aux_dim = 0;
};

/// V |sigma_s> = sum_{s'x} sqrt(T^x_{s's}) |sigma_s'> |x> |psi(s,s',x)>.
/// Throws ConsistencyError when the targets' Gram matrix differs from the
/// embedding's by more than kChannelTol.
Isometry build_isometry(const Generator& gen, const Embedding& emb,
                        const EncodingScheme& enc);

/// K acting on the memory space, indexed by emitted symbol and auxiliary
/// basis state.
struct KrausOperator {
  int symbol = 0;
  int aux = 0;
  Eigen::MatrixXcd op;
};

std::vector<KrausOperator> kraus_operators(const Isometry& iso);

/// Applies V, dephases the output register and traces out the auxiliary
/// register. The result acts on memory (x) output with index m * |X| + x and
/// is block diagonal in x. Throws ShapeError and TraceError.
Eigen::MatrixXcd apply_channel(const Isometry& iso, const Eigen::MatrixXcd& rho);

/// Unnormalised memory state conditioned on symbol x.
Eigen::MatrixXcd symbol_block(const Eigen::MatrixXcd& joint, int symbol,
                              int num_symbols);
Eigen::MatrixXcd memory_marginal(const Eigen::MatrixXcd& joint,
                                 int num_symbols);

/// Largest entrywise deviation from
/// Phi(|sigma_s><sigma_s|) = sum_{s'x} T^x_{s's} |sigma_s'><sigma_s'| (x) |x><x|
/// over all basis states s.
double channel_definition_error(const Generator& gen, const Embedding& emb,
                                const Isometry& iso);

/// Probability of the channel emitting the word when started from rho.
double channel_word_probability(const Isometry& iso, const Eigen::MatrixXcd& rho,
                                const Word& word);

/// W = S(rho) - S(rho_{S'X}) in units of k_B T ln 2.
double quantum_work(const Generator& gen, const GramMatrix& gram);
/// Same, reusing an already computed S(rho).
double quantum_work(const Generator& gen, const GramMatrix& gram,
                    double memory_entropy);

struct QuantumReport {
  double D = 0.0;
  double C = 0.0;
  double W = 0.0;
  int rank = 0;
  GramMatrix gram;
  Eigen::VectorXd spectrum;
};

QuantumReport quantum_report(const Generator& gen, const EncodingScheme& enc);
QuantumReport quantum_report(const Generator& gen, GramMatrix gram);

/// s_0 ~ pi followed by `length` transitions; deterministic given the seed.
Word sample_trajectory(const Generator& gen, std::size_t length,
                       std::uint64_t seed);
/// Draws from a caller-owned engine, for many independent runs.
Word sample_trajectory(const Generator& gen, std::size_t length,
                       std::mt19937_64& rng);

/// Measures the output register after each channel use, collapsing the
/// memory onto the observed symbol's block.
Word sample_channel_word(const Isometry& iso, const Eigen::MatrixXcd& rho,
                         std::size_t length, std::mt19937_64& rng);

/// Uniform double in [0, 1) from the top 53 bits of a draw.
inline double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace hmmq

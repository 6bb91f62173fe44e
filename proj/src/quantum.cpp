#include "hmmq/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "hmmq/classical.hpp"
#include "hmmq/errors.hpp"

namespace hmmq {

EncodingScheme EncodingScheme::end_state_label() { return EncodingScheme{}; }

EncodingScheme EncodingScheme::phase_only(Eigen::MatrixXd phases) {
  EncodingScheme e;
  e.mode_ = Mode::PhaseOnly;
  e.phases_ = std::move(phases);
  e.aux_dim_ = 1;
  return e;
}

EncodingScheme EncodingScheme::custom(int aux_dimension, AuxMap map) {
  if (aux_dimension < 1 || !map) {
    throw EncodingError("custom encoding needs a positive dimension and a map");
  }
  EncodingScheme e;
  e.mode_ = Mode::Custom;
  e.aux_dim_ = aux_dimension;
  e.map_ = std::move(map);
  return e;
}

int EncodingScheme::aux_dimension(const Generator& gen) const {
  return mode_ == Mode::EndStateLabel ? gen.num_states() : aux_dim_;
}

Eigen::VectorXcd EncodingScheme::aux_state(const Generator& gen, int from,
                                           int to, int symbol) const {
  switch (mode_) {
    case Mode::EndStateLabel: {
      Eigen::VectorXcd v = Eigen::VectorXcd::Zero(gen.num_states());
      v(to) = 1.0;
      return v;
    }
    case Mode::PhaseOnly: {
      const double phase = phases_.size() == 0 ? 0.0 : phases_(from, symbol);
      Eigen::VectorXcd v(1);
      v(0) = std::polar(1.0, phase);
      return v;
    }
    case Mode::Custom: {
      Eigen::VectorXcd v = map_(from, to, symbol);
      if (v.size() != aux_dim_) {
        throw EncodingError("custom map returned a vector of dimension " +
                            std::to_string(v.size()) + ", expected " +
                            std::to_string(aux_dim_));
      }
      return v;
    }
  }
  return {};
}

void EncodingScheme::validate(const Generator& gen) const {
  if (mode_ == Mode::EndStateLabel) return;
  if (mode_ == Mode::PhaseOnly) {
    if (!gen.unifilar()) {
      throw EncodingError(
          "phase-only encoding requires a unifilar generator: two end states "
          "for one (state, symbol) would share the same auxiliary state");
    }
    if (phases_.size() != 0 &&
        (phases_.rows() != gen.num_states() || phases_.cols() != gen.num_symbols())) {
      throw EncodingError("phase table must be |S| x |X|");
    }
    return;
  }
  for (int s = 0; s < gen.num_states(); ++s) {
    for (int x = 0; x < gen.num_symbols(); ++x) {
      std::vector<Eigen::VectorXcd> group;
      for (const Edge& e : gen.out_edges(s)) {
        if (e.symbol == x) group.push_back(aux_state(gen, s, e.to, x));
      }
      for (std::size_t a = 0; a < group.size(); ++a) {
        for (std::size_t b = a; b < group.size(); ++b) {
          const cplx ip = group[a].dot(group[b]);
          const double expect = a == b ? 1.0 : 0.0;
          if (std::abs(ip - expect) > kEncodingTol) {
            throw EncodingError("auxiliary states for transitions out of '" +
                                gen.spec().states[static_cast<std::size_t>(s)] +
                                "' on '" +
                                gen.spec().alphabet[static_cast<std::size_t>(x)] +
                                "' are not orthonormal");
          }
        }
      }
    }
  }
}

namespace {

GramMatrix end_state_overlaps(const Generator& gen) {
  const int n = gen.num_states();
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(n, n);
  std::vector<std::vector<std::pair<int, double>>> sources(
      static_cast<std::size_t>(n));
  for (int x = 0; x < gen.num_symbols(); ++x) {
    for (auto& v : sources) v.clear();
    const auto& t = gen.transition(x);
    for (Eigen::Index col = 0; col < t.outerSize(); ++col) {
      for (Eigen::SparseMatrix<double>::InnerIterator it(t, col); it; ++it) {
        sources[static_cast<std::size_t>(it.row())].emplace_back(
            static_cast<int>(col), std::sqrt(it.value()));
      }
    }
    for (const auto& group : sources) {
      for (const auto& [j, aj] : group) {
        for (const auto& [k, ak] : group) c(j, k) += aj * ak;
      }
    }
  }
  return {std::move(c)};
}

struct Branch {
  int to;
  double amplitude;
  Eigen::VectorXcd aux;
};

GramMatrix iterate_overlaps(const Generator& gen, const EncodingScheme& enc,
                            const OverlapSolverOptions& options) {
  const int n = gen.num_states();
  const int m = gen.num_symbols();
  // branches[s * m + x]
  std::vector<std::vector<Branch>> branches(static_cast<std::size_t>(n * m));
  for (int s = 0; s < n; ++s) {
    for (const Edge& e : gen.out_edges(s)) {
      branches[static_cast<std::size_t>(s * m + e.symbol)].push_back(
          Branch{e.to, std::sqrt(e.p), enc.aux_state(gen, s, e.to, e.symbol)});
    }
  }

  Eigen::MatrixXcd c = Eigen::MatrixXcd::Ones(n, n);
  Eigen::MatrixXcd next(n, n);
  for (long iter = 0; iter < options.max_iterations; ++iter) {
    double change = 0.0;
    for (int k = 0; k < n; ++k) {
      for (int j = 0; j <= k; ++j) {
        cplx acc = 0.0;
        for (int x = 0; x < m; ++x) {
          for (const Branch& bj : branches[static_cast<std::size_t>(j * m + x)]) {
            for (const Branch& bk : branches[static_cast<std::size_t>(k * m + x)]) {
              acc += bj.amplitude * bk.amplitude * bj.aux.dot(bk.aux) *
                     c(bj.to, bk.to);
            }
          }
        }
        next(j, k) = acc;
        next(k, j) = std::conj(acc);
        change = std::max(change, std::abs(acc - c(j, k)));
      }
    }
    c.swap(next);
    if (change < options.tolerance) return {std::move(c)};
  }
  throw ConvergenceError("overlap fixed point not reached within " +
                         std::to_string(options.max_iterations) + " iterations");
}

}  // namespace

GramMatrix solve_overlaps(const Generator& gen, const EncodingScheme& enc,
                          const OverlapSolverOptions& options) {
  enc.validate(gen);
  if (enc.mode() == EncodingScheme::Mode::EndStateLabel) {
    return end_state_overlaps(gen);
  }
  return iterate_overlaps(gen, enc, options);
}

Eigen::MatrixXcd stationary_gram(const GramMatrix& gram,
                                 const Eigen::VectorXd& pi) {
  if (pi.size() != gram.size()) {
    throw ShapeError("stationary vector and Gram matrix sizes differ");
  }
  const Eigen::VectorXcd root = pi.cwiseMax(0.0).cwiseSqrt().cast<cplx>();
  return root.asDiagonal() * gram.entries * root.asDiagonal();
}

QuantumMemory quantum_memory(const GramMatrix& gram, const Eigen::VectorXd& pi) {
  QuantumMemory q;
  q.spectrum = hermitian_psd_spectrum(stationary_gram(gram, pi));
  q.C = spectrum_entropy_bits(q.spectrum);
  q.rank = numerical_rank(q.spectrum);
  q.D = std::log2(static_cast<double>(std::max(q.rank, 1)));
  return q;
}

Embedding embed_states(const GramMatrix& gram) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(gram.entries);
  if (solver.info() != Eigen::Success) {
    throw SpectrumError("eigendecomposition of Gram matrix failed");
  }
  const Eigen::VectorXd& eig = solver.eigenvalues();
  if (eig.size() > 0 && eig.minCoeff() < -kNegativeEigenTol) {
    throw SpectrumError("Gram matrix has eigenvalue " +
                        std::to_string(eig.minCoeff()));
  }
  const int rank = numerical_rank(eig);
  const Eigen::Index n = gram.size();
  Embedding emb;
  emb.vectors.resize(rank, n);
  // Eigenvalues ascend; keep the top `rank`, largest first.
  for (int r = 0; r < rank; ++r) {
    const Eigen::Index idx = n - 1 - r;
    emb.vectors.row(r) =
        std::sqrt(eig(idx)) * solver.eigenvectors().col(idx).adjoint();
  }
  return emb;
}

Eigen::MatrixXcd stationary_memory_state(const Embedding& emb,
                                         const Eigen::VectorXd& pi) {
  return emb.vectors * pi.cast<cplx>().asDiagonal() * emb.vectors.adjoint();
}

Isometry build_isometry(const Generator& gen, const Embedding& emb,
                        const EncodingScheme& enc) {
  enc.validate(gen);
  if (emb.num_states() != gen.num_states()) {
    throw ShapeError("embedding has " + std::to_string(emb.num_states()) +
                     " states, generator has " +
                     std::to_string(gen.num_states()));
  }
  const int r = emb.dimension();
  const int m = gen.num_symbols();
  const int d = enc.aux_dimension(gen);
  const Eigen::Index rows = static_cast<Eigen::Index>(r) * m * d;

  Eigen::MatrixXcd targets = Eigen::MatrixXcd::Zero(rows, gen.num_states());
  for (int s = 0; s < gen.num_states(); ++s) {
    for (const Edge& e : gen.out_edges(s)) {
      const Eigen::VectorXcd aux = enc.aux_state(gen, s, e.to, e.symbol);
      const double amp = std::sqrt(e.p);
      for (int i = 0; i < r; ++i) {
        for (int a = 0; a < d; ++a) {
          targets((static_cast<Eigen::Index>(i) * m + e.symbol) * d + a, s) +=
              amp * emb.vectors(i, e.to) * aux(a);
        }
      }
    }
  }
  const double mismatch =
      (targets.adjoint() * targets - emb.vectors.adjoint() * emb.vectors)
          .cwiseAbs()
          .maxCoeff();
  if (mismatch > kChannelTol) {
    throw ConsistencyError("output Gram matrix differs from memory Gram by " +
                           std::to_string(mismatch));
  }

  // V A = Y on the span of the memory states; A has full row rank, so
  // V = Y A^dagger (A A^dagger)^{-1}.
  const Eigen::MatrixXcd aat = emb.vectors * emb.vectors.adjoint();
  const Eigen::MatrixXcd rhs = (targets * emb.vectors.adjoint()).adjoint();
  Isometry iso;
  iso.matrix = aat.llt().solve(rhs).adjoint();
  iso.memory_dim = r;
  iso.num_symbols = m;
  iso.aux_dim = d;

  const double defect =
      (iso.matrix.adjoint() * iso.matrix - Eigen::MatrixXcd::Identity(r, r))
          .cwiseAbs()
          .maxCoeff();
  if (defect > kChannelTol) {
    throw ConsistencyError("constructed map is not an isometry (defect " +
                           std::to_string(defect) + ")");
  }
  return iso;
}

std::vector<KrausOperator> kraus_operators(const Isometry& iso) {
  std::vector<KrausOperator> ops;
  const int r = iso.memory_dim, m = iso.num_symbols, d = iso.aux_dim;
  ops.reserve(static_cast<std::size_t>(m * d));
  for (int x = 0; x < m; ++x) {
    for (int a = 0; a < d; ++a) {
      KrausOperator k{x, a, Eigen::MatrixXcd(r, r)};
      for (int i = 0; i < r; ++i) {
        k.op.row(i) = iso.matrix.row((static_cast<Eigen::Index>(i) * m + x) * d + a);
      }
      ops.push_back(std::move(k));
    }
  }
  return ops;
}

Eigen::MatrixXcd apply_channel(const Isometry& iso, const Eigen::MatrixXcd& rho) {
  const int r = iso.memory_dim, m = iso.num_symbols;
  if (rho.rows() != r || rho.cols() != r) {
    throw ShapeError("memory state must be " + std::to_string(r) + " x " +
                     std::to_string(r));
  }
  const double trace = rho.trace().real();
  if (std::abs(trace - 1.0) > kChannelTol) {
    throw TraceError("memory state has trace " + std::to_string(trace));
  }
  Eigen::MatrixXcd joint = Eigen::MatrixXcd::Zero(r * m, r * m);
  for (const auto& k : kraus_operators(iso)) {
    const Eigen::MatrixXcd block = k.op * rho * k.op.adjoint();
    for (int j = 0; j < r; ++j)
      for (int i = 0; i < r; ++i) joint(i * m + k.symbol, j * m + k.symbol) += block(i, j);
  }
  return joint;
}

Eigen::MatrixXcd symbol_block(const Eigen::MatrixXcd& joint, int symbol,
                              int num_symbols) {
  const Eigen::Index r = joint.rows() / num_symbols;
  Eigen::MatrixXcd block(r, r);
  for (Eigen::Index j = 0; j < r; ++j)
    for (Eigen::Index i = 0; i < r; ++i)
      block(i, j) = joint(i * num_symbols + symbol, j * num_symbols + symbol);
  return block;
}

Eigen::MatrixXcd memory_marginal(const Eigen::MatrixXcd& joint,
                                 int num_symbols) {
  const Eigen::Index r = joint.rows() / num_symbols;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(r, r);
  for (int x = 0; x < num_symbols; ++x) out += symbol_block(joint, x, num_symbols);
  return out;
}

double channel_definition_error(const Generator& gen, const Embedding& emb,
                                const Isometry& iso) {
  const int r = emb.dimension(), m = gen.num_symbols();
  double worst = 0.0;
  for (int s = 0; s < gen.num_states(); ++s) {
    const Eigen::VectorXcd v = emb.vectors.col(s);
    const Eigen::MatrixXcd out = apply_channel(iso, v * v.adjoint());
    Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(r * m, r * m);
    for (const Edge& e : gen.out_edges(s)) {
      const Eigen::VectorXcd w = emb.vectors.col(e.to);
      for (int j = 0; j < r; ++j)
        for (int i = 0; i < r; ++i)
          expected(i * m + e.symbol, j * m + e.symbol) += e.p * w(i) * std::conj(w(j));
    }
    worst = std::max(worst, (out - expected).cwiseAbs().maxCoeff());
  }
  return worst;
}

double channel_word_probability(const Isometry& iso, const Eigen::MatrixXcd& rho,
                                const Word& word) {
  Eigen::MatrixXcd state = rho / rho.trace();
  double prob = 1.0;
  for (int x : word.symbols) {
    if (x < 0 || x >= iso.num_symbols) {
      throw AlphabetError("symbol index " + std::to_string(x) + " outside alphabet");
    }
    const Eigen::MatrixXcd block =
        symbol_block(apply_channel(iso, state), x, iso.num_symbols);
    const double step = block.trace().real();
    if (step <= 0.0) return 0.0;
    prob *= step;
    state = block / step;
  }
  return prob;
}

double quantum_work(const Generator& gen, const GramMatrix& gram) {
  return quantum_work(gen, gram,
                      quantum_memory(gram, gen.stationary()).C);
}

double quantum_work(const Generator& gen, const GramMatrix& gram,
                    double memory_entropy) {
  const Eigen::MatrixXd joint = joint_end_state_symbol(gen);
  const Eigen::VectorXd symbol_probs = joint.colwise().sum().transpose();
  double joint_entropy = shannon_bits(symbol_probs);
  for (int x = 0; x < gen.num_symbols(); ++x) {
    const double px = symbol_probs(x);
    if (px <= kEntropyFloor) continue;
    std::vector<Eigen::Index> support;
    for (Eigen::Index s = 0; s < joint.rows(); ++s)
      if (joint(s, x) > 0.0) support.push_back(s);
    const Eigen::Index k = static_cast<Eigen::Index>(support.size());
    Eigen::MatrixXcd block(k, k);
    for (Eigen::Index b = 0; b < k; ++b) {
      for (Eigen::Index a = 0; a < k; ++a) {
        block(a, b) = std::sqrt(joint(support[a], x) * joint(support[b], x)) *
                      gram(support[a], support[b]) / px;
      }
    }
    joint_entropy += px * spectrum_entropy_bits(hermitian_psd_spectrum(block));
  }
  return memory_entropy - joint_entropy;
}

QuantumReport quantum_report(const Generator& gen, const EncodingScheme& enc) {
  return quantum_report(gen, solve_overlaps(gen, enc));
}

QuantumReport quantum_report(const Generator& gen, GramMatrix gram) {
  if (gram.size() != gen.num_states()) {
    throw ShapeError("Gram matrix does not match generator size");
  }
  QuantumReport q;
  auto mem = quantum_memory(gram, gen.stationary());
  q.D = mem.D;
  q.C = mem.C;
  q.rank = mem.rank;
  q.spectrum = std::move(mem.spectrum);
  q.W = quantum_work(gen, gram, q.C);
  q.gram = std::move(gram);
  return q;
}

namespace {

int draw(const std::vector<double>& cumulative, double u) {
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  return static_cast<int>(
      std::min<std::ptrdiff_t>(it - cumulative.begin(),
                               static_cast<std::ptrdiff_t>(cumulative.size()) - 1));
}

}  // namespace

Word sample_trajectory(const Generator& gen, std::size_t length,
                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return sample_trajectory(gen, length, rng);
}

Word sample_trajectory(const Generator& gen, std::size_t length,
                       std::mt19937_64& rng) {
  Word word;
  if (length == 0) return word;
  word.symbols.reserve(length);

  std::vector<double> start(static_cast<std::size_t>(gen.num_states()));
  double acc = 0.0;
  for (int s = 0; s < gen.num_states(); ++s) start[static_cast<std::size_t>(s)] = acc += gen.stationary()(s);
  std::vector<std::vector<double>> cumulative(static_cast<std::size_t>(gen.num_states()));
  for (int s = 0; s < gen.num_states(); ++s) {
    acc = 0.0;
    for (const Edge& e : gen.out_edges(s)) cumulative[static_cast<std::size_t>(s)].push_back(acc += e.p);
  }

  int state = draw(start, uniform_unit(rng) * start.back());
  for (std::size_t t = 0; t < length; ++t) {
    const auto& cum = cumulative[static_cast<std::size_t>(state)];
    const Edge& e = gen.out_edges(state)[static_cast<std::size_t>(
        draw(cum, uniform_unit(rng) * cum.back()))];
    word.symbols.push_back(e.symbol);
    state = e.to;
  }
  return word;
}

Word sample_channel_word(const Isometry& iso, const Eigen::MatrixXcd& rho,
                         std::size_t length, std::mt19937_64& rng) {
  Word word;
  Eigen::MatrixXcd state = rho / rho.trace();
  for (std::size_t t = 0; t < length; ++t) {
    const Eigen::MatrixXcd joint = apply_channel(iso, state);
    std::vector<double> cumulative(static_cast<std::size_t>(iso.num_symbols));
    double acc = 0.0;
    for (int x = 0; x < iso.num_symbols; ++x) {
      acc += std::max(0.0, symbol_block(joint, x, iso.num_symbols).trace().real());
      cumulative[static_cast<std::size_t>(x)] = acc;
    }
    const int x = draw(cumulative, uniform_unit(rng) * acc);
    word.symbols.push_back(x);
    const Eigen::MatrixXcd block = symbol_block(joint, x, iso.num_symbols);
    state = block / block.trace().real();
  }
  return word;
}

}  // namespace hmmq

#pragma once

// Brute-force reference computations. They read the raw transition list of a
// spec and use dense linear algebra only, so they share no code path with the
// library beyond the spec struct itself.

#include <cmath>
#include <complex>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hmmq/generator.hpp"

namespace oracle {

struct Dense {
  int n = 0;
  int m = 0;
  // t[x](to, from)
  std::vector<Eigen::MatrixXd> t;
  Eigen::VectorXd pi;
};

inline int index_of(const std::vector<std::string>& v, const std::string& s) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] == s) return static_cast<int>(i);
  return -1;
}

// Stationary vector from the eigenvector of T with eigenvalue closest to 1.
inline Eigen::VectorXd eigen_stationary(const Eigen::MatrixXd& total) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(total);
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < total.rows(); ++i) {
    if (std::abs(es.eigenvalues()(i) - 1.0) < std::abs(es.eigenvalues()(best) - 1.0))
      best = i;
  }
  Eigen::VectorXd v = es.eigenvectors().col(best).real();
  return v / v.sum();
}

inline Dense dense(const hmmq::GeneratorSpec& spec) {
  Dense d;
  d.n = static_cast<int>(spec.states.size());
  d.m = static_cast<int>(spec.alphabet.size());
  d.t.assign(static_cast<std::size_t>(d.m), Eigen::MatrixXd::Zero(d.n, d.n));
  for (const auto& tr : spec.transitions) {
    d.t[static_cast<std::size_t>(index_of(spec.alphabet, tr.symbol))](
        index_of(spec.states, tr.to), index_of(spec.states, tr.from)) += tr.p;
  }
  Eigen::MatrixXd total = Eigen::MatrixXd::Zero(d.n, d.n);
  for (const auto& m : d.t) total += m;
  d.pi = eigen_stationary(total);
  return d;
}

// Explicit sum over state paths s_0..s_L.
inline double path_sum_probability(const Dense& d, const std::vector<int>& word) {
  const std::size_t len = word.size();
  std::vector<int> path(len + 1, 0);
  double total = 0.0;
  while (true) {
    double p = d.pi(path[0]);
    for (std::size_t t = 0; t < len && p > 0.0; ++t)
      p *= d.t[static_cast<std::size_t>(word[t])](path[t + 1], path[t]);
    total += p;
    std::size_t k = 0;
    while (k <= len && ++path[k] == d.n) path[k++] = 0;
    if (k > len) break;
  }
  return total;
}

// 1^T T^{x_L} ... T^{x_1} pi with the dense tables.
inline double matrix_word_probability(const Dense& d, const std::vector<int>& word) {
  Eigen::VectorXd v = d.pi;
  for (int x : word) v = d.t[static_cast<std::size_t>(x)] * v;
  return v.sum();
}

inline std::vector<std::vector<int>> all_words(int m, int len) {
  std::vector<std::vector<int>> out;
  std::vector<int> w(static_cast<std::size_t>(len), 0);
  while (true) {
    out.push_back(w);
    int k = len - 1;
    while (k >= 0 && ++w[static_cast<std::size_t>(k)] == m) w[static_cast<std::size_t>(k--)] = 0;
    if (k < 0) break;
  }
  return out;
}

inline double block_entropy(const Dense& d, int len) {
  double h = 0.0;
  for (const auto& w : all_words(d.m, len)) {
    const double p = path_sum_probability(d, w);
    if (p > 1e-15) h -= p * std::log2(p);
  }
  return h;
}

inline double shannon(const Eigen::VectorXd& p) {
  double h = 0.0;
  for (double v : p)
    if (v > 1e-15) h -= v * std::log2(v);
  return h;
}

inline double von_neumann(const Eigen::MatrixXcd& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
  double h = 0.0;
  for (double l : es.eigenvalues())
    if (l > 1e-12) h -= l * std::log2(l);
  return h;
}

// c_jk = sum over (j', x) of sqrt(T^x_{j'j} T^x_{j'k}), straight from the
// transition list.
inline Eigen::MatrixXd end_state_gram(const hmmq::GeneratorSpec& spec) {
  const auto n = static_cast<Eigen::Index>(spec.states.size());
  std::map<std::pair<std::string, std::string>, std::vector<std::pair<int, double>>> into;
  for (const auto& tr : spec.transitions)
    into[{tr.to, tr.symbol}].push_back({index_of(spec.states, tr.from), tr.p});
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [key, sources] : into)
    for (const auto& [j, pj] : sources)
      for (const auto& [k, pk] : sources) c(j, k) += std::sqrt(pj * pk);
  return c;
}

// Explicit memory state sum_s pi(s) |v_s><v_s| from column vectors.
inline Eigen::MatrixXcd memory_state(const Eigen::MatrixXcd& vectors,
                                     const Eigen::VectorXd& pi) {
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(vectors.rows(), vectors.rows());
  for (Eigen::Index s = 0; s < vectors.cols(); ++s)
    rho += pi(s) * vectors.col(s) * vectors.col(s).adjoint();
  return rho;
}

// Unifilar entropy rate from the dense tables.
inline double unifilar_entropy_rate(const Dense& d) {
  double h = 0.0;
  for (int s = 0; s < d.n; ++s) {
    Eigen::VectorXd out(d.m);
    for (int x = 0; x < d.m; ++x) out(x) = d.t[static_cast<std::size_t>(x)].col(s).sum();
    h += d.pi(s) * shannon(out);
  }
  return h;
}

// SNS closed forms by direct summation.
inline double sns_phi(long n, double p) {
  return n <= 0 ? 0.0 : static_cast<double>(n) * std::pow(p, n - 1) * (1 - p) * (1 - p);
}

inline double sns_series_sum(double p, long terms) {
  double s = 0.0;
  for (long n = 1; n <= terms; ++n) s += sns_phi(n, p);
  return s;
}

// Sum_{n >= 0} Phi(n) by double summation of phi.
inline double sns_survival_series(double p, long terms) {
  double total = 0.0;
  for (long n = 0; n <= terms; ++n) {
    double tail = 0.0;
    for (long k = std::max(n, 1L); k <= terms; ++k) tail += sns_phi(k, p);
    total += tail;
  }
  return total;
}

// <sigma_m|sigma_n> = sum_k sqrt(w[k+m] w[k+n] / (S[m] S[n])), direct sum.
inline double renewal_overlap(const std::vector<double>& w, std::size_t m, std::size_t n) {
  double sm = 0.0, sn = 0.0, acc = 0.0;
  for (std::size_t k = m; k < w.size(); ++k) sm += w[k];
  for (std::size_t k = n; k < w.size(); ++k) sn += w[k];
  for (std::size_t k = 0; k + std::max(m, n) < w.size(); ++k)
    acc += std::sqrt(w[k + m] * w[k + n]);
  return acc / std::sqrt(sm * sn);
}

}  // namespace oracle

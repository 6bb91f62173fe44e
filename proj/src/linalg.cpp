#include "hmmq/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "hmmq/errors.hpp"

namespace hmmq {

double shannon_bits(std::span<const double> probabilities) {
  double h = 0.0;
  for (double p : probabilities) {
    if (p > kEntropyFloor) h -= p * std::log2(p);
  }
  return h;
}

double shannon_bits(const Eigen::VectorXd& probabilities) {
  return shannon_bits(
      std::span<const double>(probabilities.data(), probabilities.size()));
}

double spectrum_entropy_bits(const Eigen::VectorXd& eigenvalues) {
  double h = 0.0;
  for (double l : eigenvalues) {
    if (l >= kSpectrumEntropyFloor) h -= l * std::log2(l);
  }
  return h;
}

int numerical_rank(const Eigen::VectorXd& eigenvalues) {
  if (eigenvalues.size() == 0) return 0;
  const double top = eigenvalues.maxCoeff();
  if (top <= 0.0) return 0;
  return static_cast<int>(
      (eigenvalues.array() > kRankRelTol * top).count());
}

namespace {

// Union-find over indices; entries joined when the matrix couples them.
std::vector<std::vector<Eigen::Index>> coupled_components(
    const Eigen::MatrixXcd& m) {
  const Eigen::Index n = m.rows();
  std::vector<Eigen::Index> parent(n);
  std::iota(parent.begin(), parent.end(), Eigen::Index{0});
  auto find = [&](Eigen::Index i) {
    while (parent[i] != i) {
      parent[i] = parent[parent[i]];
      i = parent[i];
    }
    return i;
  };
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      if (m(i, j) != cplx(0.0, 0.0)) {
        const Eigen::Index a = find(i), b = find(j);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    }
  }
  std::vector<std::vector<Eigen::Index>> out;
  std::vector<Eigen::Index> slot(n, -1);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index r = find(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<Eigen::Index>(out.size());
      out.emplace_back();
    }
    out[slot[r]].push_back(i);
  }
  return out;
}

Eigen::VectorXd dense_spectrum(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
      m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw SpectrumError("self-adjoint eigensolver failed");
  }
  return solver.eigenvalues();
}

// Pivoted Cholesky M ~ L L^dagger; the nonzero spectrum of L L^dagger equals
// that of the small matrix L^dagger L.
Eigen::VectorXd compressed_spectrum(const Eigen::MatrixXcd& m) {
  const Eigen::Index n = m.rows();
  Eigen::VectorXd residual = m.diagonal().real();
  const double trace = residual.sum();
  const double stop = 1e-14 * std::max(trace, 0.0);
  std::vector<Eigen::VectorXcd> columns;
  std::vector<Eigen::Index> pivots;
  while (static_cast<Eigen::Index>(columns.size()) < n) {
    Eigen::Index p;
    const double d = residual.maxCoeff(&p);
    if (d <= stop) break;
    Eigen::VectorXcd col = m.col(p);
    for (const auto& prev : columns) col -= prev * std::conj(prev(p));
    col /= std::sqrt(d);
    for (Eigen::Index i = 0; i < n; ++i) residual(i) -= std::norm(col(i));
    for (Eigen::Index q : pivots) col(q) = 0.0;
    residual(p) = 0.0;
    columns.push_back(std::move(col));
    pivots.push_back(p);
  }
  if (residual.minCoeff() < -kNegativeEigenTol) {
    throw SpectrumError("matrix is not positive semidefinite (residual " +
                        std::to_string(residual.minCoeff()) + ")");
  }
  const Eigen::Index k = static_cast<Eigen::Index>(columns.size());
  Eigen::MatrixXcd factor(n, k);
  for (Eigen::Index j = 0; j < k; ++j) factor.col(j) = columns[j];
  Eigen::MatrixXcd small = factor.adjoint() * factor;
  Eigen::VectorXd eig = dense_spectrum(small);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  out.head(k) = eig;
  return out;
}

}  // namespace

Eigen::VectorXd hermitian_psd_spectrum(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) throw ShapeError("spectrum of non-square matrix");
  const Eigen::Index n = m.rows();
  std::vector<double> all;
  all.reserve(n);
  for (const auto& comp : coupled_components(m)) {
    const Eigen::Index k = static_cast<Eigen::Index>(comp.size());
    if (k == 1) {
      all.push_back(m(comp[0], comp[0]).real());
      continue;
    }
    Eigen::MatrixXcd sub(k, k);
    for (Eigen::Index j = 0; j < k; ++j)
      for (Eigen::Index i = 0; i < k; ++i) sub(i, j) = m(comp[i], comp[j]);
    const Eigen::VectorXd eig =
        k <= kDenseSpectrumLimit ? dense_spectrum(sub) : compressed_spectrum(sub);
    all.insert(all.end(), eig.begin(), eig.end());
  }
  std::sort(all.begin(), all.end(), std::greater<>());
  Eigen::VectorXd out = Eigen::Map<Eigen::VectorXd>(all.data(), n);
  if (n > 0 && out(n - 1) < -kNegativeEigenTol) {
    throw SpectrumError("eigenvalue " + std::to_string(out(n - 1)) +
                        " below -1e-9");
  }
  return out;
}

}  // namespace hmmq

#pragma once

#include <complex>
#include <span>

#include <Eigen/Dense>

namespace hmmq {

using cplx = std::complex<double>;

/// Probabilities below this are treated as exact zeros in entropy sums.
inline constexpr double kEntropyFloor = 1e-15;
/// Eigenvalues below this do not contribute to a von Neumann entropy.
inline constexpr double kSpectrumEntropyFloor = 1e-12;
/// Relative cutoff (against the largest eigenvalue) for counting rank.
inline constexpr double kRankRelTol = 1e-10;
/// Eigenvalues more negative than this make a matrix non-PSD.
inline constexpr double kNegativeEigenTol = 1e-9;

/// Shannon entropy in bits, with 0 log 0 := 0.
double shannon_bits(std::span<const double> probabilities);
double shannon_bits(const Eigen::VectorXd& probabilities);

/// Von Neumann entropy in bits of a spectrum; eigenvalues below
/// kSpectrumEntropyFloor are dropped.
double spectrum_entropy_bits(const Eigen::VectorXd& eigenvalues);

/// Number of eigenvalues above kRankRelTol * max eigenvalue.
int numerical_rank(const Eigen::VectorXd& eigenvalues);

/// Eigenvalues (descending) of a Hermitian positive-semidefinite matrix.
///
/// The matrix is split into the connected components of its sparsity
/// pattern. Small components use a dense self-adjoint eigensolver; large ones
/// are first compressed with a diagonally pivoted Cholesky factorisation,
/// which keeps every eigenvalue above ~1e-14 * trace. Throws SpectrumError
/// if an eigenvalue falls below -kNegativeEigenTol.
Eigen::VectorXd hermitian_psd_spectrum(const Eigen::MatrixXcd& m);

/// Components larger than this take the pivoted-Cholesky route.
inline constexpr Eigen::Index kDenseSpectrumLimit = 400;

}  // namespace hmmq

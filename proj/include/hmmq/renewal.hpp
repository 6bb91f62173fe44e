#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "hmmq/generator.hpp"
#include "hmmq/quantum.hpp"

namespace hmmq {

/// Target bound on sum_{n > N} Phi(n) when choosing a truncation.
inline constexpr double kTailMassTol = 1e-12;
inline constexpr std::size_t kMaxTruncation = 10000;

/// Discrete renewal process: wait[n] is the probability of n zeros between
/// consecutive ones, n = 0..N. A truncated family carries the discarded
/// tail mass in its last entry.
struct RenewalFamily {
  std::vector<double> wait;
  /// Survival Phi(n) = sum_{n' >= n} wait[n'], same length as wait.
  std::vector<double> survival;
  /// SNS parameter, when the family came from one.
  std::optional<double> p;

  std::size_t truncation() const { return wait.size() - 1; }
};

/// n p^{n-1} (1-p)^2 for n >= 1, zero at n = 0. DomainError unless 0 < p < 1.
double sns_wait_time(long n, double p);

/// Exact SNS survival p^{n-1} (n (1-p) + p) for n >= 1, and 1 at n = 0.
double sns_survival(long n, double p);

/// Smallest N with sum_{n > N} Phi(n) < kTailMassTol, capped at
/// kMaxTruncation.
std::size_t sns_auto_truncation(double p);

/// SNS family truncated at N (auto-selected when absent).
RenewalFamily sns_family(double p, std::optional<std::size_t> truncation = {});

/// Family from an explicit finite wait-time distribution (must sum to 1
/// within 1e-12 and end in a nonzero entry).
RenewalFamily renewal_family(std::vector<double> wait);

double survival(const RenewalFamily& fam, std::size_t n);
/// mu = 1 / sum_{n >= 0} Phi(n).
double firing_rate(const RenewalFamily& fam);

/// Two-state nondeterministic SNS generator.
GeneratorSpec sns_A_spec(double p);
/// Predictive renewal generator: sigma_n counts zeros since the last one.
GeneratorSpec renewal_B_spec(const RenewalFamily& fam);
/// Retrodictive renewal generator: sigma_n counts zeros until the next one.
GeneratorSpec renewal_C_spec(const RenewalFamily& fam);

Generator build_sns_A(double p);
Generator build_sns_B(double p, std::optional<std::size_t> truncation = {});
Generator build_sns_C(double p, std::optional<std::size_t> truncation = {});

/// Columns |sigma_n> with components sqrt(wait[n'+n] / Phi(n)), n' = 0..N.
Embedding quantum_renewal_states(const RenewalFamily& fam);

/// Overlaps of quantum_renewal_states, by the backward recursion
/// U(m, n) = sqrt(wait[m] wait[n]) + U(m+1, n+1).
GramMatrix renewal_gram(const RenewalFamily& fam);

}  // namespace hmmq

#include "hmmq/renewal.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "hmmq/errors.hpp"

namespace hmmq {

namespace {

void check_p(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("SNS parameter p must lie in (0, 1), got " +
                      std::to_string(p));
  }
}

std::string state_label(std::size_t n) { return "s" + std::to_string(n); }

// sum_{n >= k} Phi(n) for the SNS, k >= 1.
double sns_survival_tail(long k, double p) {
  return std::pow(p, static_cast<double>(k - 1)) *
         (static_cast<double>(k) * (1.0 - p) + 2.0 * p) / (1.0 - p);
}

std::vector<double> survival_from_wait(const std::vector<double>& wait) {
  std::vector<double> surv(wait.size());
  double acc = 0.0;
  for (std::size_t i = wait.size(); i-- > 0;) surv[i] = acc += wait[i];
  return surv;
}

}  // namespace

double sns_wait_time(long n, double p) {
  check_p(p);
  if (n <= 0) return 0.0;
  return static_cast<double>(n) * std::pow(p, static_cast<double>(n - 1)) *
         (1.0 - p) * (1.0 - p);
}

double sns_survival(long n, double p) {
  check_p(p);
  if (n <= 0) return 1.0;
  return std::pow(p, static_cast<double>(n - 1)) *
         (static_cast<double>(n) * (1.0 - p) + p);
}

std::size_t sns_auto_truncation(double p) {
  check_p(p);
  for (std::size_t n = 1; n < kMaxTruncation; ++n) {
    if (sns_survival_tail(static_cast<long>(n) + 1, p) < kTailMassTol) return n;
  }
  return kMaxTruncation;
}

RenewalFamily sns_family(double p, std::optional<std::size_t> truncation) {
  check_p(p);
  const std::size_t n_max = truncation.value_or(sns_auto_truncation(p));
  if (n_max < 1) throw DomainError("SNS truncation must be at least 1");
  RenewalFamily fam;
  fam.p = p;
  fam.wait.resize(n_max + 1);
  for (std::size_t n = 0; n < n_max; ++n) {
    fam.wait[n] = sns_wait_time(static_cast<long>(n), p);
  }
  fam.wait[n_max] = sns_survival(static_cast<long>(n_max), p);
  fam.survival = survival_from_wait(fam.wait);
  return fam;
}

RenewalFamily renewal_family(std::vector<double> wait) {
  if (wait.empty()) throw DomainError("empty wait-time distribution");
  for (double w : wait) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw DomainError("wait-time probabilities must be non-negative");
    }
  }
  const double total = std::accumulate(wait.begin(), wait.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-12) {
    throw DomainError("wait-time distribution sums to " + std::to_string(total));
  }
  if (wait.back() <= 0.0) {
    throw DomainError("last wait-time entry must be positive");
  }
  RenewalFamily fam;
  fam.wait = std::move(wait);
  fam.survival = survival_from_wait(fam.wait);
  return fam;
}

double survival(const RenewalFamily& fam, std::size_t n) {
  return n < fam.survival.size() ? fam.survival[n] : 0.0;
}

double firing_rate(const RenewalFamily& fam) {
  return 1.0 /
         std::accumulate(fam.survival.begin(), fam.survival.end(), 0.0);
}

GeneratorSpec sns_A_spec(double p) {
  check_p(p);
  GeneratorSpec spec;
  spec.states = {"s0", "s1"};
  spec.alphabet = {"0", "1"};
  spec.transitions = {{"s0", "s0", "0", p},
                      {"s0", "s1", "0", 1.0 - p},
                      {"s1", "s0", "1", 1.0 - p},
                      {"s1", "s1", "0", p}};
  return spec;
}

GeneratorSpec renewal_B_spec(const RenewalFamily& fam) {
  const std::size_t n_max = fam.truncation();
  GeneratorSpec spec;
  spec.alphabet = {"0", "1"};
  for (std::size_t n = 0; n <= n_max; ++n) spec.states.push_back(state_label(n));
  for (std::size_t n = 0; n <= n_max; ++n) {
    const double here = fam.survival[n];
    if (fam.wait[n] > 0.0) {
      spec.transitions.push_back(
          {state_label(n), state_label(0), "1", fam.wait[n] / here});
    }
    if (n < n_max && fam.survival[n + 1] > 0.0) {
      spec.transitions.push_back(
          {state_label(n), state_label(n + 1), "0", fam.survival[n + 1] / here});
    }
  }
  return spec;
}

GeneratorSpec renewal_C_spec(const RenewalFamily& fam) {
  const std::size_t n_max = fam.truncation();
  GeneratorSpec spec;
  spec.alphabet = {"0", "1"};
  for (std::size_t n = 0; n <= n_max; ++n) spec.states.push_back(state_label(n));
  for (std::size_t n = 0; n <= n_max; ++n) {
    if (fam.wait[n] > 0.0) {
      spec.transitions.push_back(
          {state_label(0), state_label(n), "1", fam.wait[n] / fam.survival[0]});
    }
  }
  for (std::size_t n = 1; n <= n_max; ++n) {
    spec.transitions.push_back({state_label(n), state_label(n - 1), "0", 1.0});
  }
  return spec;
}

Generator build_sns_A(double p) { return validate_spec(sns_A_spec(p)); }

Generator build_sns_B(double p, std::optional<std::size_t> truncation) {
  return validate_spec(renewal_B_spec(sns_family(p, truncation)));
}

Generator build_sns_C(double p, std::optional<std::size_t> truncation) {
  return validate_spec(renewal_C_spec(sns_family(p, truncation)));
}

Embedding quantum_renewal_states(const RenewalFamily& fam) {
  const Eigen::Index size = static_cast<Eigen::Index>(fam.wait.size());
  Embedding emb;
  emb.vectors = Eigen::MatrixXcd::Zero(size, size);
  for (Eigen::Index n = 0; n < size; ++n) {
    for (Eigen::Index k = 0; n + k < size; ++k) {
      emb.vectors(k, n) = std::sqrt(fam.wait[static_cast<std::size_t>(n + k)] /
                                    fam.survival[static_cast<std::size_t>(n)]);
    }
  }
  return emb;
}

GramMatrix renewal_gram(const RenewalFamily& fam) {
  const Eigen::Index size = static_cast<Eigen::Index>(fam.wait.size());
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(size, size);
  for (Eigen::Index m = size - 1; m >= 0; --m) {
    for (Eigen::Index n = size - 1; n >= 0; --n) {
      const double tail = (m + 1 < size && n + 1 < size) ? u(m + 1, n + 1) : 0.0;
      u(m, n) = std::sqrt(fam.wait[static_cast<std::size_t>(m)] *
                          fam.wait[static_cast<std::size_t>(n)]) + tail;
    }
  }
  Eigen::VectorXd root(size);
  for (Eigen::Index n = 0; n < size; ++n)
    root(n) = 1.0 / std::sqrt(fam.survival[static_cast<std::size_t>(n)]);
  GramMatrix g;
  g.entries = (root.asDiagonal() * u * root.asDiagonal()).cast<cplx>();
  return g;
}

}  // namespace hmmq

#pragma once

#include <Eigen/Dense>

#include "hmmq/generator.hpp"

namespace hmmq {

/// Boltzmann constant in J/K.
inline constexpr double kBoltzmann = 1.380649e-23;

/// Tolerance below which a negative dissipation is attributed to rounding.
inline constexpr double kDissipationTol = 1e-6;

struct MemoryCost {
  double dimension_bits = 0.0;  // D = log2 rank
  double entropy_bits = 0.0;    // C
};

struct ClassicalReport {
  double D = 0.0;
  double C = 0.0;
  /// Work per step in units of k_B T ln 2.
  double W = 0.0;
  /// joint(s', x) = P(S' = s', X = x) after one step from stationarity.
  Eigen::MatrixXd joint;
};

/// D = log2 |S|, C = H(pi).
MemoryCost classical_memory(const Generator& gen);

/// P(s', x) = sum_s pi(s) T^x_{s's}, as an |S| x |X| table.
Eigen::MatrixXd joint_end_state_symbol(const Generator& gen);

/// W = H(S) - H(S'X) in units of k_B T ln 2.
double classical_work(const Generator& gen);

ClassicalReport classical_report(const Generator& gen);

/// W + h_mu: the work spent beyond the entropy-rate bound. Throws
/// BoundViolationError when below -kDissipationTol.
double locality_dissipation(double work, double entropy_rate);

/// Converts a work value in units of k_B T ln 2 to joules.
double work_in_joules(double work, double temperature_kelvin);

}  // namespace hmmq

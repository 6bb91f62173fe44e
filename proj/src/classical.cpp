#include "hmmq/classical.hpp"

#include <cmath>
#include <string>

#include "hmmq/errors.hpp"
#include "hmmq/linalg.hpp"

namespace hmmq {

MemoryCost classical_memory(const Generator& gen) {
  return {std::log2(static_cast<double>(gen.num_states())),
          shannon_bits(gen.stationary())};
}

Eigen::MatrixXd joint_end_state_symbol(const Generator& gen) {
  Eigen::MatrixXd joint(gen.num_states(), gen.num_symbols());
  for (int x = 0; x < gen.num_symbols(); ++x) {
    joint.col(x) = gen.transition(x) * gen.stationary();
  }
  return joint;
}

double classical_work(const Generator& gen) {
  const Eigen::MatrixXd joint = joint_end_state_symbol(gen);
  const Eigen::VectorXd flat =
      Eigen::Map<const Eigen::VectorXd>(joint.data(), joint.size());
  return shannon_bits(gen.stationary()) - shannon_bits(flat);
}

ClassicalReport classical_report(const Generator& gen) {
  ClassicalReport r;
  const auto mem = classical_memory(gen);
  r.D = mem.dimension_bits;
  r.C = mem.entropy_bits;
  r.joint = joint_end_state_symbol(gen);
  const Eigen::VectorXd flat =
      Eigen::Map<const Eigen::VectorXd>(r.joint.data(), r.joint.size());
  r.W = r.C - shannon_bits(flat);
  return r;
}

double locality_dissipation(double work, double entropy_rate) {
  const double d = work + entropy_rate;
  if (d < -kDissipationTol) {
    throw BoundViolationError("work " + std::to_string(work) +
                              " lies below -h_mu = " +
                              std::to_string(-entropy_rate));
  }
  return d;
}

double work_in_joules(double work, double temperature_kelvin) {
  if (!(temperature_kelvin > 0.0)) {
    throw DomainError("temperature must be positive");
  }
  return work * kBoltzmann * temperature_kelvin * std::log(2.0);
}

}  // namespace hmmq

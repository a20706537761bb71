#include "sosgibbs/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "sosgibbs/tree_group.hpp"

namespace sosgibbs {

const char* to_string(Regime r) {
  switch (r) {
    case Regime::Ferromagnetic: return "FM";
    case Regime::Antiferromagnetic: return "AFM";
    case Regime::Free: return "FREE";
  }
  return "?";
}

ModelParams::ModelParams(int k, int m, double J, double beta, double theta, bool theta_given)
    : k_(k), m_(m), J_(J), beta_(beta), theta_(theta), log_theta_(std::log(theta)),
      theta_given_(theta_given) {
  if (k < 1) throw std::invalid_argument("tree order k must be >= 1");
  if (m < 1) throw std::invalid_argument("max spin m must be >= 1");
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw std::invalid_argument("beta must be finite and >= 0");
  if (!std::isfinite(J)) throw std::invalid_argument("J must be finite");
  if (!(theta > 0.0) || !std::isfinite(theta)) throw std::invalid_argument("theta must be finite and > 0");
}

ModelParams ModelParams::from_coupling(int k, int m, double J, double beta) {
  return ModelParams(k, m, J, beta, std::exp(J * beta), false);
}

ModelParams ModelParams::from_theta(int k, int m, double theta) {
  if (!(theta > 0.0)) throw std::invalid_argument("theta must be > 0");
  return ModelParams(k, m, std::log(theta), 1.0, theta, true);
}

Regime ModelParams::regime() const {
  if (theta_given_) {
    if (theta_ < 1.0) return Regime::Ferromagnetic;
    if (theta_ > 1.0) return Regime::Antiferromagnetic;
    return Regime::Free;
  }
  if (J_ < 0.0) return Regime::Ferromagnetic;
  if (J_ > 0.0) return Regime::Antiferromagnetic;
  return Regime::Free;
}

ModelParams ModelParams::with_beta(double beta) const {
  if (theta_given_) throw std::logic_error("with_beta on theta-specified parameters");
  return from_coupling(k_, m_, J_, beta);
}

double theta(const ModelParams& params) { return params.theta(); }

double hamiltonian(const SpinConfig& config, const Ball& ball, const ModelParams& params) {
  if (config.depth > ball.depth()) throw std::invalid_argument("ball shallower than configuration");
  const int n = ball.level_end(config.depth);
  if (static_cast<int>(config.spins.size()) != n)
    throw std::invalid_argument("configuration does not cover V_n");
  long gaps = 0;
  for (int v = 1; v < n; ++v)
    gaps += std::abs(config.spins[static_cast<std::size_t>(v)] -
                     config.spins[static_cast<std::size_t>(ball.parent(v))]);
  return -params.J() * static_cast<double>(gaps);
}

double boundary_energy(const SpinConfig& config, std::span<const int> boundary,
                       const Ball& outer_ball, const ModelParams& params) {
  const int next = config.depth + 1;
  if (outer_ball.depth() < next) throw std::invalid_argument("ball does not reach W_{n+1}");
  const int begin = outer_ball.level_begin(next);
  const int end = outer_ball.level_end(next);
  if (static_cast<int>(boundary.size()) != end - begin)
    throw std::invalid_argument("boundary does not cover W_{n+1}");
  long gaps = 0;
  for (int y = begin; y < end; ++y) {
    const int x = outer_ball.parent(y);
    gaps += std::abs(config.spins[static_cast<std::size_t>(x)] - boundary[static_cast<std::size_t>(y - begin)]);
  }
  return -params.J() * static_cast<double>(gaps);
}

}  // namespace sosgibbs

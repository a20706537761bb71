#pragma once

#include <span>
#include <vector>

namespace sosgibbs {

enum class Regime { Ferromagnetic, Antiferromagnetic, Free };

const char* to_string(Regime r);

// Physical configuration of one SOS instance on the Cayley tree of order k
// with spin set {0..m}. theta = exp(J*beta) is computed once on construction;
// every formula downstream of the recursion consumes theta only.
class ModelParams {
 public:
  static ModelParams from_coupling(int k, int m, double J, double beta);
  // J and beta are not known in this case; J() reports ln(theta) and beta() 1.
  static ModelParams from_theta(int k, int m, double theta);

  int k() const { return k_; }
  int m() const { return m_; }
  double J() const { return J_; }
  double beta() const { return beta_; }
  double theta() const { return theta_; }
  double log_theta() const { return log_theta_; }
  bool theta_given() const { return theta_given_; }
  Regime regime() const;

  ModelParams with_beta(double beta) const;

 private:
  ModelParams(int k, int m, double J, double beta, double theta, bool theta_given);

  int k_;
  int m_;
  double J_;
  double beta_;
  double theta_;
  double log_theta_;
  bool theta_given_;
};

double theta(const ModelParams& params);

class Ball;

// Spins of every vertex of V_n, indexed in the breadth-first order of Ball.
struct SpinConfig {
  int depth = 0;
  std::vector<int> spins;
};

// -J * sum over edges of V_n of |sigma(x) - sigma(y)|.
double hamiltonian(const SpinConfig& config, const Ball& ball, const ModelParams& params);

// -J * sum over edges (x in W_n, y in W_{n+1}) of |sigma(x) - omega(y)|.
// `boundary` is indexed in sphere order of W_{n+1}.
double boundary_energy(const SpinConfig& config, std::span<const int> boundary,
                       const Ball& outer_ball, const ModelParams& params);

}  // namespace sosgibbs

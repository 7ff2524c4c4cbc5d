#pragma once

#include <functional>
#include <vector>

#include "qbsim/beamsplitter.hpp"
#include "qbsim/fock.hpp"

namespace qbsim {

// Effective Raman coupling between the two cavity modes and a two-level atom,
// hbar = 1. The exchange term g (a1 a2^dag |2><1| + a1^dag a2 |1><2|) swaps a
// mode-1 photon for a mode-2 photon while flipping the atom, so the total
// field photon number is conserved. Optional Stark shifts
// g (1/r) n1 |1><1| + g r n2 |2><2| keep the ratio s2/s1 = r^2.
struct RamanHamiltonianConfig {
  double g = 1.0;
  double r = 1.0;
  bool include_stark = true;
  double tau = 1.0;

  double stark_s1() const { return 1.0 / r; }
  double stark_s2() const { return r; }

  void validate() const;
};

// One-atom-per-pass pump map reduced to two Kraus operators
// K_j = <j| U(tau) (alpha|1> + beta|2>), j in {1,2}. Both are block
// structured over total photon number.
class RamanChannel {
 public:
  RamanChannel(RamanHamiltonianConfig config, Complex alpha, Complex beta,
               int n_max);

  const RamanHamiltonianConfig& config() const { return config_; }
  Complex alpha() const { return alpha_; }
  Complex beta() const { return beta_; }
  int n_max() const { return static_cast<int>(kraus1_.size()) - 1; }

  const Eigen::MatrixXcd& kraus1(int total) const { return kraus1_.at(total); }
  const Eigen::MatrixXcd& kraus2(int total) const { return kraus2_.at(total); }

  // max_N max_ij |K1^dag K1 + K2^dag K2 - I|
  double completeness_error() const;

 private:
  RamanHamiltonianConfig config_;
  Complex alpha_;
  Complex beta_;
  std::vector<Eigen::MatrixXcd> kraus1_;
  std::vector<Eigen::MatrixXcd> kraus2_;
};

RamanChannel build_channel(const RamanHamiltonianConfig& config, Complex alpha,
                           Complex beta, int n_max);

// rho -> K1 rho K1^dag + K2 rho K2^dag
TwoModeState apply_channel(const RamanChannel& ch, const TwoModeState& rho);

struct SteadyStateResult {
  TwoModeState state;
  int iterations = 0;
  bool converged = false;
  // trace distance between the last two iterates
  double final_distance = 0.0;
};

using IterationObserver =
    std::function<void(int iteration, const TwoModeState& state, double distance)>;

// Repeatedly applies the channel until the trace distance between successive
// iterates drops below tol. On convergence the returned state is the iterate
// whose one-step residual equals the stopping distance, so converged = true
// certifies trace_distance(apply_channel(ch, state), state) <= tol.
// Non-convergence is reported through the result, not an exception; the last
// iterate and distance are returned either way.
SteadyStateResult iterate_to_steady(const RamanChannel& ch,
                                    const TwoModeState& rho0, double tol = 1e-8,
                                    int max_iter = 10000,
                                    const IterationObserver& observer = {});

struct SteadyStateSpec {
  // C_{n,0} for n = 0..n_max
  Eigen::VectorXcd seed_coeffs;
  Complex kappa;
};

/// Pure steady state with C_{n1,n2} = (-kappa)^{n2} sqrt((n1+n2)!/(n1! n2!))
/// C_{n1+n2,0}, normalized. Throws DegenerateSeed when the seed is all zero.
TwoModeVector analytic_steady_state(const SteadyStateSpec& spec, int n_max);

/// Seed for which the analytic steady state is the coherent product
/// |A gamma> (x) |-kappa A gamma|, A = 1/sqrt(1+|kappa|^2): the image of
/// |gamma>|0> under the cavity transformation.
Eigen::VectorXcd coherent_seed(Complex gamma, Complex kappa, int n_max);

}  // namespace qbsim

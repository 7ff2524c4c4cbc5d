#pragma once

#include <cstdint>

#include "qbsim/fock.hpp"

namespace qbsim {

// Attenuation amplitude A = 1/sqrt(1+|kappa|^2); A -> 0 is the strong
// attenuation limit where only the vacuum and one-photon components survive.
struct AttenuationParams {
  double A = 1.0;

  static AttenuationParams from_kappa(Complex kappa);
  void validate() const;
};

struct MomentSummary {
  Complex mean_gamma;    // <gamma>   = tr(rho a)
  double mean_abs2 = 0;  // <|gamma|^2> = tr(rho a^dag a)
};

MomentSummary moments(const CoherentMixture& mix);

/// Sum_k w_k |A g_k><A g_k| at the given cutoff: the mode-1 marginal of the
/// broadcast output.
SingleModeState attenuate_exact(const CoherentMixture& mix, double A, int n_max,
                                double tail_tol = kDefaultTailTol);

struct QubitState {
  Eigen::Matrix2cd matrix;

  double purity() const { return (matrix * matrix).trace().real(); }
  double min_eigenvalue() const;
  void validate(double herm_tol = 1e-12, double trace_tol = 1e-10,
                double psd_tol = 1e-10) const;
};

/// Leading-order attenuated state on span{|0>,|1>}:
/// [[1 - A^2<|g|^2>, A<g*>], [A<g>, A^2<|g|^2>]]. Exact to O(A^3) in trace
/// norm; its smallest eigenvalue can undershoot zero by O(A^4) for
/// near-coherent inputs. Throws InvalidTruncation when A^2<|g|^2> >= 1.
QubitState attenuate_two_level(const MomentSummary& ms, double A);

/// Closed form for <n|rho_A|n>: Sum_k w_k (A^2|g_k|^2)^n e^{-A^2|g_k|^2}/n!.
double diagonal_term(const CoherentMixture& mix, double A, int n);

struct PurityCheck {
  bool satisfied = false;
  double variance = 0.0;   // <|g|^2> - |<g>|^2
  double threshold = 0.0;  // A^2 (<|g|^2>)^2
};

/// The attenuated state is effectively pure when the mixture variance does
/// not exceed A^2 (<|g|^2>)^2 (times slack) and that bound is itself small,
/// at most 1% of <|g|^2>.
PurityCheck purity_condition(const MomentSummary& ms, double A,
                             double slack = 1.0);

/// Attenuated pure state proportional to |0> + A (<|g|^2>/<g*>) |1>,
/// renormalized to unit norm; the O(A^4) norm deficit of the leading-order
/// prefactor is written to norm_deficit_out if given. Throws
/// ZeroMeanAmplitude when <g> vanishes (phase-symmetric mixtures).
Eigen::Vector2cd phi_state(const MomentSummary& ms, double A,
                           double* norm_deficit_out = nullptr);

// Unambiguous-discrimination measurement {E_rho, E_sigma, E_?}:
// E_rho = C_rho |phi_sigma^perp><phi_sigma^perp| identifies rho with zero
// error, and symmetrically for sigma; E_? absorbs the rest.
struct PovmTriple {
  Eigen::Matrix2cd e_rho;
  Eigen::Matrix2cd e_sigma;
  Eigen::Matrix2cd e_inconclusive;
  double c_rho = 0.0;
  double c_sigma = 0.0;
  double s_overlap = 0.0;         // |<phi_sigma|phi_rho>|
  double success_probability = 0;  // prior-averaged conclusive probability

  double completeness_error() const;
  double min_eigenvalue() const;  // over all three operators
};

struct Priors {
  double p_rho = 0.5;
  double p_sigma = 0.5;
};

/// For equal priors C_rho = C_sigma = 1/(1+s) and the success probability is
/// 1 - s. Unequal priors are optimized by a scan over the boundary of the
/// region where E_? stays positive. Throws StatesIdentical when 1-s <= 1e-12.
PovmTriple build_povm(const Eigen::Vector2cd& phi_rho,
                      const Eigen::Vector2cd& phi_sigma,
                      Priors priors = Priors{});

struct DiscriminationOptions {
  double A = 0.1;
  std::int64_t n_samples = 100000;
  std::uint64_t seed = 0;
  int n_max = 24;
  double purity_slack = 1.0;
};

struct DiscriminationReport {
  std::uint64_t seed = 0;
  std::int64_t n_samples = 0;
  std::int64_t count_rho = 0;
  std::int64_t count_sigma = 0;
  std::int64_t count_inconclusive = 0;
  std::int64_t count_errors = 0;
  double s_overlap = 0.0;
  double pmax_analytic = 0.0;
  double empirical_success_rate = 0.0;
  double empirical_error_rate = 0.0;
  double empirical_inconclusive_rate = 0.0;
  bool purity_ok_rho = false;
  bool purity_ok_sigma = false;
};

/// Seeded Monte Carlo run: each shot picks the true state with equal priors
/// and samples the POVM outcome from the Born probabilities. When the purity
/// condition fails for an input, the sampled state falls back to the exact
/// attenuated state projected onto span{|0>,|1>} and renormalized. Counts are
/// reproducible from the seed alone (counter-based SplitMix64 stream).
DiscriminationReport run_discrimination_experiment(const CoherentMixture& mix_rho,
                                                   const CoherentMixture& mix_sigma,
                                                   const DiscriminationOptions& opts);

/// Same sampler with explicitly injected qubit states (used when the states
/// of interest are already two-level, e.g. orthogonal test states).
DiscriminationReport run_qubit_experiment(const Eigen::Vector2cd& phi_rho,
                                          const Eigen::Vector2cd& phi_sigma,
                                          std::int64_t n_samples,
                                          std::uint64_t seed);

}  // namespace qbsim

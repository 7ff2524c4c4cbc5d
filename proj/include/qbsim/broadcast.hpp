#pragma once

#include "qbsim/beamsplitter.hpp"
#include "qbsim/fock.hpp"

namespace qbsim {

struct BroadcastReport {
  SingleModeState marginal1;
  SingleModeState marginal2;
  // trace distance between the two output marginals
  double marginal_distance = 0.0;
  // trace distance of each numeric marginal to its closed-form counterpart
  double target_distance1 = 0.0;
  double target_distance2 = 0.0;
  // closed-form output vs beam-splitter conjugation
  double crosscheck_distance = 0.0;
  double output_purity = 0.0;
  Complex kappa;
};

/// Push a coherent mixture (mode 1, mode 2 in vacuum) through the cavity
/// beam splitter. The output is computed twice: in closed form as
/// Sum_k w_k |A g_k><A g_k| (x) |-kappa A g_k><-kappa A g_k| with
/// A = 1/sqrt(1+|kappa|^2), and numerically as S rho S^dag; the report
/// records the trace distance between the two routes. Returns the numeric
/// state together with both marginals.
std::pair<TwoModeState, BroadcastReport> broadcast(const CoherentMixture& mix,
                                                   Complex kappa, int n_max,
                                                   double tail_tol = kDefaultTailTol);

/// Input mixture whose broadcast at kappa = -1 has both marginals equal to
/// the target: amplitudes scale by sqrt(2), weights are unchanged (for a
/// discrete mixture the change of variables moves no weight between atoms).
CoherentMixture prepare_for_broadcast(const CoherentMixture& target);

/// True when the mixture is a point mass, i.e. the kappa = -1 output is a
/// pure product state (the exact-cloning case). Decided by the purity of the
/// realized output and of its marginal.
bool is_clone_case(const CoherentMixture& mix, int n_max,
                   double tail_tol = kDefaultTailTol);

}  // namespace qbsim

#include "qbsim/broadcast.hpp"

#include <cmath>

namespace qbsim {

namespace {

// Closed-form image of the mixture under the cavity transformation:
// each atom |g> (x) |0> maps to |A g> (x) |-kappa A g|.
TwoModeState closed_form_output(const CoherentMixture& mix, Complex kappa,
                                int n_max, double tail_tol) {
  const double a = 1.0 / std::sqrt(1.0 + std::norm(kappa));
  TwoModeState out{FockCutoff{n_max}};
  for (const auto& term : mix.terms()) {
    const Eigen::VectorXcd mode1 = coherent_vector(a * term.gamma, n_max, tail_tol);
    const Eigen::VectorXcd mode2 =
        coherent_vector(-kappa * a * term.gamma, n_max, tail_tol);
    out.add_outer(term.weight, product_vector(mode1, mode2, n_max, tail_tol));
  }
  return out;
}

SingleModeState closed_form_marginal(const CoherentMixture& mix,
                                     Complex amplitude_scale, int n_max,
                                     double tail_tol) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n_max + 1, n_max + 1);
  for (const auto& term : mix.terms()) {
    const Eigen::VectorXcd c =
        coherent_vector(amplitude_scale * term.gamma, n_max, tail_tol);
    m.noalias() += term.weight * c * c.adjoint();
  }
  return SingleModeState{std::move(m)};
}

}  // namespace

std::pair<TwoModeState, BroadcastReport> broadcast(const CoherentMixture& mix,
                                                   Complex kappa, int n_max,
                                                   double tail_tol) {
  const TwoModeState input = mixture_state(mix, n_max, tail_tol);
  const BeamSplitter bs = beam_splitter_for_kappa(kappa, n_max);
  TwoModeState output = apply(bs, input);

  const TwoModeState closed = closed_form_output(mix, kappa, n_max, tail_tol);

  const double a = 1.0 / std::sqrt(1.0 + std::norm(kappa));
  BroadcastReport report;
  report.kappa = kappa;
  report.crosscheck_distance = trace_distance(output, closed);
  report.marginal1 = partial_trace(output, Mode::one);
  report.marginal2 = partial_trace(output, Mode::two);
  report.marginal_distance = trace_distance(report.marginal1, report.marginal2);
  report.target_distance1 = trace_distance(
      report.marginal1, closed_form_marginal(mix, a, n_max, tail_tol));
  report.target_distance2 = trace_distance(
      report.marginal2, closed_form_marginal(mix, -kappa * a, n_max, tail_tol));
  report.output_purity = output.purity();
  return {std::move(output), report};
}

CoherentMixture prepare_for_broadcast(const CoherentMixture& target) {
  return target.with_scaled_amplitudes(std::sqrt(2.0));
}

bool is_clone_case(const CoherentMixture& mix, int n_max, double tail_tol) {
  auto [output, report] = broadcast(mix, Complex{-1.0, 0.0}, n_max, tail_tol);
  const double marginal_purity = report.marginal1.purity();
  return report.output_purity >= 1.0 - 1e-8 && marginal_purity >= 1.0 - 1e-8;
}

}  // namespace qbsim

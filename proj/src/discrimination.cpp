#include "qbsim/discrimination.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qbsim {

namespace {

// Counter-based SplitMix64: draw i of a seeded stream is finalize(seed + i*phi).
// Splittable by construction, so sharded runs reproduce the same counts.
std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double uniform_draw(std::uint64_t seed, std::uint64_t counter) {
  const std::uint64_t z = splitmix64(seed + counter * 0x9e3779b97f4a7c15ULL);
  return static_cast<double>(z >> 11) * 0x1.0p-53;
}

double born_probability(const Eigen::Matrix2cd& effect,
                        const Eigen::Matrix2cd& state) {
  return std::max(0.0, (effect * state).trace().real());
}

Eigen::Vector2cd orthogonal_complement(const Eigen::Vector2cd& v) {
  return Eigen::Vector2cd(-std::conj(v(1)), std::conj(v(0)));
}

double min_eigenvalue_2x2(const Eigen::Matrix2cd& m) {
  const double a = m(0, 0).real();
  const double d = m(1, 1).real();
  const double off = std::abs(m(0, 1));
  return 0.5 * (a + d) - std::sqrt(0.25 * (a - d) * (a - d) + off * off);
}

struct SampledState {
  Eigen::Matrix2cd matrix;
  bool purity_ok = false;
};

// Qubit state a shot is sampled from: the attenuated pure state when the
// purity condition holds, otherwise the exact attenuated state projected
// onto span{|0>,|1>} and renormalized.
SampledState sampling_state(const CoherentMixture& mix,
                            const DiscriminationOptions& opts) {
  const MomentSummary ms = moments(mix);
  const PurityCheck purity = purity_condition(ms, opts.A, opts.purity_slack);
  SampledState out;
  out.purity_ok = purity.satisfied;
  if (purity.satisfied) {
    const Eigen::Vector2cd phi = phi_state(ms, opts.A);
    out.matrix = phi * phi.adjoint();
  } else {
    const SingleModeState exact =
        attenuate_exact(mix, opts.A, opts.n_max);
    Eigen::Matrix2cd corner = exact.matrix.topLeftCorner<2, 2>();
    out.matrix = corner / corner.trace().real();
  }
  return out;
}

DiscriminationReport sample_povm(const PovmTriple& povm,
                                 const Eigen::Matrix2cd& state_rho,
                                 const Eigen::Matrix2cd& state_sigma,
                                 std::int64_t n_samples, std::uint64_t seed) {
  DiscriminationReport report;
  report.seed = seed;
  report.n_samples = n_samples;
  report.s_overlap = povm.s_overlap;
  report.pmax_analytic = povm.success_probability;

  const double p_rho_given_rho = born_probability(povm.e_rho, state_rho);
  const double p_sigma_given_rho = born_probability(povm.e_sigma, state_rho);
  const double p_rho_given_sigma = born_probability(povm.e_rho, state_sigma);
  const double p_sigma_given_sigma = born_probability(povm.e_sigma, state_sigma);

  std::int64_t correct = 0;
  for (std::int64_t i = 0; i < n_samples; ++i) {
    const bool true_is_rho = uniform_draw(seed, 2 * i) < 0.5;
    const double u = uniform_draw(seed, 2 * i + 1);
    const double p_rho = true_is_rho ? p_rho_given_rho : p_rho_given_sigma;
    const double p_sigma = true_is_rho ? p_sigma_given_rho : p_sigma_given_sigma;
    if (u < p_rho) {
      ++report.count_rho;
      if (true_is_rho) ++correct;
      else ++report.count_errors;
    } else if (u < p_rho + p_sigma) {
      ++report.count_sigma;
      if (!true_is_rho) ++correct;
      else ++report.count_errors;
    } else {
      ++report.count_inconclusive;
    }
  }
  const double n = static_cast<double>(n_samples);
  report.empirical_success_rate = correct / n;
  report.empirical_error_rate = report.count_errors / n;
  report.empirical_inconclusive_rate = report.count_inconclusive / n;
  return report;
}

}  // namespace

AttenuationParams AttenuationParams::from_kappa(Complex kappa) {
  return AttenuationParams{1.0 / std::sqrt(1.0 + std::norm(kappa))};
}

void AttenuationParams::validate() const {
  if (A <= 0.0 || A > 1.0) {
    throw ValidationError("attenuation", "A must lie in (0, 1]");
  }
}

MomentSummary moments(const CoherentMixture& mix) {
  MomentSummary ms;
  for (const auto& t : mix.terms()) {
    ms.mean_gamma += t.weight * t.gamma;
    ms.mean_abs2 += t.weight * std::norm(t.gamma);
  }
  return ms;
}

SingleModeState attenuate_exact(const CoherentMixture& mix, double A, int n_max,
                                double tail_tol) {
  AttenuationParams{A}.validate();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n_max + 1, n_max + 1);
  for (const auto& t : mix.terms()) {
    const Eigen::VectorXcd c = coherent_vector(A * t.gamma, n_max, tail_tol);
    m.noalias() += t.weight * c * c.adjoint();
  }
  return SingleModeState{std::move(m)};
}

double QubitState::min_eigenvalue() const { return min_eigenvalue_2x2(matrix); }

void QubitState::validate(double herm_tol, double trace_tol,
                          double psd_tol) const {
  if ((matrix - matrix.adjoint()).cwiseAbs().maxCoeff() > herm_tol) {
    throw ValidationError("qubit_state", "not Hermitian");
  }
  if (std::abs(matrix.trace().real() - 1.0) > trace_tol) {
    throw ValidationError("qubit_state", "trace differs from one");
  }
  const double min_eig = min_eigenvalue();
  if (min_eig < -psd_tol) {
    throw NotPositive(min_eig);
  }
}

QubitState attenuate_two_level(const MomentSummary& ms, double A) {
  AttenuationParams{A}.validate();
  const double one_photon = A * A * ms.mean_abs2;
  if (one_photon >= 1.0) {
    throw InvalidTruncation("A^2 <|gamma|^2> = " + std::to_string(one_photon) +
                            " leaves no vacuum population");
  }
  QubitState out;
  out.matrix << Complex{1.0 - one_photon, 0.0}, A * std::conj(ms.mean_gamma),
      A * ms.mean_gamma, Complex{one_photon, 0.0};
  return out;
}

double diagonal_term(const CoherentMixture& mix, double A, int n) {
  AttenuationParams{A}.validate();
  if (n < 0) throw ValidationError("diagonal_term", "n must be nonnegative");
  double value = 0.0;
  double log_factorial = 0.0;
  for (int k = 2; k <= n; ++k) log_factorial += std::log(static_cast<double>(k));
  for (const auto& t : mix.terms()) {
    const double x = A * A * std::norm(t.gamma);
    const double log_term = (n > 0 && x == 0.0)
                                ? -std::numeric_limits<double>::infinity()
                                : n * std::log(x == 0.0 ? 1.0 : x) - x - log_factorial;
    value += t.weight * ((n > 0 && x == 0.0) ? 0.0 : std::exp(log_term));
  }
  return value;
}

PurityCheck purity_condition(const MomentSummary& ms, double A, double slack) {
  if (ms.mean_abs2 <= 0.0) {
    throw ValidationError("purity_condition", "<|gamma|^2> must be positive");
  }
  PurityCheck check;
  check.variance = ms.mean_abs2 - std::norm(ms.mean_gamma);
  check.threshold = A * A * ms.mean_abs2 * ms.mean_abs2;
  // "much smaller" pinned at 1%
  check.satisfied = check.variance <= check.threshold * slack &&
                    check.threshold <= 0.01 * ms.mean_abs2;
  return check;
}

Eigen::Vector2cd phi_state(const MomentSummary& ms, double A,
                           double* norm_deficit_out) {
  AttenuationParams{A}.validate();
  const double scale = std::max(1.0, std::sqrt(std::max(0.0, ms.mean_abs2)));
  if (std::abs(ms.mean_gamma) <= 1e-12 * scale) {
    throw ZeroMeanAmplitude(
        "tr(rho a) = 0: attenuated states commute, no unambiguous "
        "discrimination");
  }
  const double prefactor = std::sqrt(std::max(0.0, 1.0 - A * A * ms.mean_abs2));
  Eigen::Vector2cd phi;
  phi << prefactor,
      prefactor * A * (ms.mean_abs2 / std::conj(ms.mean_gamma));
  const double nrm = phi.norm();
  if (norm_deficit_out != nullptr) *norm_deficit_out = 1.0 - nrm * nrm;
  phi /= nrm;
  return phi;
}

double PovmTriple::completeness_error() const {
  const Eigen::Matrix2cd sum = e_rho + e_sigma + e_inconclusive;
  return (sum - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff();
}

double PovmTriple::min_eigenvalue() const {
  return std::min({min_eigenvalue_2x2(e_rho), min_eigenvalue_2x2(e_sigma),
                   min_eigenvalue_2x2(e_inconclusive)});
}

PovmTriple build_povm(const Eigen::Vector2cd& phi_rho,
                      const Eigen::Vector2cd& phi_sigma, Priors priors) {
  if (std::abs(phi_rho.norm() - 1.0) > 1e-10 ||
      std::abs(phi_sigma.norm() - 1.0) > 1e-10) {
    throw ValidationError("povm", "input states must be unit vectors");
  }
  if (std::abs(priors.p_rho + priors.p_sigma - 1.0) > 1e-12 ||
      priors.p_rho < 0.0 || priors.p_sigma < 0.0) {
    throw ValidationError("povm", "priors must be a probability pair");
  }
  const double s = std::abs(phi_sigma.dot(phi_rho));
  if (1.0 - s <= 1e-12) {
    throw StatesIdentical("attenuated states coincide, |<phi_s|phi_r>| = " +
                          std::to_string(s));
  }

  const Eigen::Matrix2cd proj_perp_sigma = [&] {
    const Eigen::Vector2cd v = orthogonal_complement(phi_sigma);
    return Eigen::Matrix2cd(v * v.adjoint());
  }();
  const Eigen::Matrix2cd proj_perp_rho = [&] {
    const Eigen::Vector2cd v = orthogonal_complement(phi_rho);
    return Eigen::Matrix2cd(v * v.adjoint());
  }();

  const auto inconclusive = [&](double c_rho, double c_sigma) {
    return Eigen::Matrix2cd(Eigen::Matrix2cd::Identity() -
                            c_rho * proj_perp_sigma - c_sigma * proj_perp_rho);
  };
  // largest c_sigma keeping E_? positive at fixed c_rho
  const auto max_c_sigma = [&](double c_rho) {
    double lo = 0.0;
    double hi = 1.0;
    if (min_eigenvalue_2x2(inconclusive(c_rho, hi)) >= 0.0) return hi;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      (min_eigenvalue_2x2(inconclusive(c_rho, mid)) >= 0.0 ? lo : hi) = mid;
    }
    return lo;
  };

  double c_rho;
  double c_sigma;
  if (std::abs(priors.p_rho - priors.p_sigma) < 1e-15) {
    c_rho = c_sigma = 1.0 / (1.0 + s);
  } else {
    // conclusive probability is linear in (C_rho, C_sigma), so the optimum
    // sits on the positivity boundary; scan it and refine by golden section
    const auto objective = [&](double c) {
      return priors.p_rho * c + priors.p_sigma * max_c_sigma(c);
    };
    double best_c = 0.0;
    double best_val = objective(0.0);
    const int coarse = 400;
    for (int i = 1; i <= coarse; ++i) {
      const double c = static_cast<double>(i) / coarse;
      const double val = objective(c);
      if (val > best_val) {
        best_val = val;
        best_c = c;
      }
    }
    double lo = std::max(0.0, best_c - 1.5 / coarse);
    double hi = std::min(1.0, best_c + 1.5 / coarse);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - gr * (hi - lo);
    double x2 = lo + gr * (hi - lo);
    double f1 = objective(x1);
    double f2 = objective(x2);
    for (int i = 0; i < 120; ++i) {
      if (f1 < f2) {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + gr * (hi - lo);
        f2 = objective(x2);
      } else {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - gr * (hi - lo);
        f1 = objective(x1);
      }
    }
    c_rho = 0.5 * (lo + hi);
    c_sigma = max_c_sigma(c_rho);
  }

  PovmTriple povm;
  povm.c_rho = c_rho;
  povm.c_sigma = c_sigma;
  povm.s_overlap = s;
  povm.e_rho = c_rho * proj_perp_sigma;
  povm.e_sigma = c_sigma * proj_perp_rho;
  povm.e_inconclusive = inconclusive(c_rho, c_sigma);
  povm.success_probability =
      (priors.p_rho * c_rho + priors.p_sigma * c_sigma) * (1.0 - s * s);
  return povm;
}

DiscriminationReport run_discrimination_experiment(const CoherentMixture& mix_rho,
                                                   const CoherentMixture& mix_sigma,
                                                   const DiscriminationOptions& opts) {
  const SampledState state_rho = sampling_state(mix_rho, opts);
  const SampledState state_sigma = sampling_state(mix_sigma, opts);
  const Eigen::Vector2cd phi_rho = phi_state(moments(mix_rho), opts.A);
  const Eigen::Vector2cd phi_sigma = phi_state(moments(mix_sigma), opts.A);
  const PovmTriple povm = build_povm(phi_rho, phi_sigma);

  DiscriminationReport report = sample_povm(povm, state_rho.matrix,
                                            state_sigma.matrix, opts.n_samples,
                                            opts.seed);
  report.purity_ok_rho = state_rho.purity_ok;
  report.purity_ok_sigma = state_sigma.purity_ok;
  return report;
}

DiscriminationReport run_qubit_experiment(const Eigen::Vector2cd& phi_rho,
                                          const Eigen::Vector2cd& phi_sigma,
                                          std::int64_t n_samples,
                                          std::uint64_t seed) {
  const PovmTriple povm = build_povm(phi_rho, phi_sigma);
  DiscriminationReport report =
      sample_povm(povm, Eigen::Matrix2cd(phi_rho * phi_rho.adjoint()),
                  Eigen::Matrix2cd(phi_sigma * phi_sigma.adjoint()), n_samples,
                  seed);
  report.purity_ok_rho = true;
  report.purity_ok_sigma = true;
  return report;
}

}  // namespace qbsim

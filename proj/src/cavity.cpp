#include "qbsim/cavity.hpp"

#include <cmath>

namespace qbsim {

namespace {

// Atom-field sector at total photon number N: dimension 2(N+1), index
// a*(N+1)+j with a = 0 for atom level |1>, a = 1 for |2>, j = mode-2 photons.
Eigen::MatrixXcd sector_hamiltonian(const RamanHamiltonianConfig& cfg,
                                    int total) {
  const int dim = FockCutoff::block_dim(total);
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(2 * dim, 2 * dim);
  for (int j = 0; j < total; ++j) {
    // a1 a2^dag |2><1|: (a=0, j) -> (a=1, j+1), amplitude sqrt((N-j)(j+1))
    const double f = cfg.g * std::sqrt(static_cast<double>(total - j) * (j + 1));
    h(dim + j + 1, j) += f;
    h(j, dim + j + 1) += f;
  }
  if (cfg.include_stark) {
    for (int j = 0; j <= total; ++j) {
      h(j, j) += cfg.g * cfg.stark_s1() * (total - j);      // n1 |1><1|
      h(dim + j, dim + j) += cfg.g * cfg.stark_s2() * j;    // n2 |2><2|
    }
  }
  return h;
}

Eigen::MatrixXcd sector_unitary(const RamanHamiltonianConfig& cfg, int total) {
  const int dim = 2 * FockCutoff::block_dim(total);
  if (cfg.tau == 0.0) {
    return Eigen::MatrixXcd::Identity(dim, dim);
  }
  const Eigen::MatrixXcd h = sector_hamiltonian(cfg, total);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
  Eigen::VectorXcd phase(dim);
  for (int i = 0; i < dim; ++i) {
    phase(i) = std::exp(Complex{0.0, -solver.eigenvalues()(i) * cfg.tau});
  }
  return solver.eigenvectors() * phase.asDiagonal() *
         solver.eigenvectors().adjoint();
}

}  // namespace

void RamanHamiltonianConfig::validate() const {
  if (g <= 0.0) throw ValidationError("channel", "g must be positive");
  if (r <= 0.0) throw ValidationError("channel", "r must be positive");
  if (tau < 0.0) throw ValidationError("channel", "tau must be nonnegative");
}

RamanChannel::RamanChannel(RamanHamiltonianConfig config, Complex alpha,
                           Complex beta, int n_max)
    : config_(config), alpha_(alpha), beta_(beta) {
  config_.validate();
  const double norm2 = std::norm(alpha) + std::norm(beta);
  if (std::abs(norm2 - 1.0) > 1e-12) {
    throw ValidationError("channel", "atom state not normalized");
  }
  kraus1_.reserve(n_max + 1);
  kraus2_.reserve(n_max + 1);
  for (int total = 0; total <= n_max; ++total) {
    const int dim = FockCutoff::block_dim(total);
    const Eigen::MatrixXcd u = sector_unitary(config_, total);
    // K_j = <atom j| U |atom in>, atom in = alpha|1> + beta|2>
    kraus1_.push_back(alpha * u.topLeftCorner(dim, dim) +
                      beta * u.topRightCorner(dim, dim));
    kraus2_.push_back(alpha * u.bottomLeftCorner(dim, dim) +
                      beta * u.bottomRightCorner(dim, dim));
  }
}

double RamanChannel::completeness_error() const {
  double err = 0.0;
  for (std::size_t n = 0; n < kraus1_.size(); ++n) {
    const Eigen::MatrixXcd sum = kraus1_[n].adjoint() * kraus1_[n] +
                                 kraus2_[n].adjoint() * kraus2_[n];
    const Eigen::MatrixXcd dev =
        sum - Eigen::MatrixXcd::Identity(sum.rows(), sum.cols());
    err = std::max(err, dev.cwiseAbs().maxCoeff());
  }
  return err;
}

RamanChannel build_channel(const RamanHamiltonianConfig& config, Complex alpha,
                           Complex beta, int n_max) {
  return RamanChannel(config, alpha, beta, n_max);
}

TwoModeState apply_channel(const RamanChannel& ch, const TwoModeState& rho) {
  if (ch.n_max() != rho.n_max()) {
    throw DimensionMismatch("channel and state cutoffs differ");
  }
  TwoModeState out(rho.cutoff());
  for (const auto& [key, b] : rho.blocks()) {
    const auto& [n, m] = key;
    out.set_block(n, m,
                  ch.kraus1(n) * b * ch.kraus1(m).adjoint() +
                      ch.kraus2(n) * b * ch.kraus2(m).adjoint());
  }
  return out;
}

SteadyStateResult iterate_to_steady(const RamanChannel& ch,
                                    const TwoModeState& rho0, double tol,
                                    int max_iter,
                                    const IterationObserver& observer) {
  if (tol <= 0.0) {
    throw ValidationError("iterate_to_steady", "tol must be positive");
  }
  SteadyStateResult result;
  result.state = rho0;
  for (int l = 1; l <= max_iter; ++l) {
    TwoModeState next = apply_channel(ch, result.state);
    const double dist = trace_distance(next, result.state);
    result.iterations = l;
    result.final_distance = dist;
    if (observer) observer(l, next, dist);
    if (dist <= tol) {
      // keep the pre-application iterate: its one-step residual is exactly
      // the distance that triggered the stop
      result.converged = true;
      break;
    }
    result.state = std::move(next);
  }
  return result;
}

TwoModeVector analytic_steady_state(const SteadyStateSpec& spec, int n_max) {
  if (spec.seed_coeffs.size() == 0 || spec.seed_coeffs.cwiseAbs().maxCoeff() == 0.0) {
    throw DegenerateSeed("steady-state seed is all zero");
  }
  TwoModeVector out{FockCutoff{n_max}};
  for (int total = 0; total <= n_max; ++total) {
    Complex c = total < spec.seed_coeffs.size() ? spec.seed_coeffs(total)
                                                : Complex{0.0, 0.0};
    for (int j = 0; j <= total; ++j) {
      // C(N,j) = (-kappa)^j sqrt(binom(N,j)) C_{N,0}, built by recurrence
      out.block(total)(j) = c;
      if (j < total) {
        c *= -spec.kappa *
             std::sqrt(static_cast<double>(total - j) / (j + 1.0));
      }
    }
  }
  out.normalize();
  return out;
}

Eigen::VectorXcd coherent_seed(Complex gamma, Complex kappa, int n_max) {
  const double a = 1.0 / std::sqrt(1.0 + std::norm(kappa));
  return coherent_vector(a * gamma, n_max, 1.0);
}

}  // namespace qbsim

#include "qbsim/beamsplitter.hpp"

#include <cmath>

namespace qbsim {

namespace {

// a1^dag a2 restricted to total-photon block N (basis |N-j, j>):
// j -> j-1 with amplitude sqrt((N-j+1) j).
Eigen::MatrixXcd mode_exchange_block(int total) {
  const int dim = FockCutoff::block_dim(total);
  Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(dim, dim);
  for (int j = 1; j <= total; ++j) {
    t(j - 1, j) = std::sqrt(static_cast<double>(total - j + 1) * j);
  }
  return t;
}

double wrap_phase(double phi) {
  // map into (-pi, pi]
  double p = std::remainder(phi, 2.0 * M_PI);
  if (p <= -M_PI) p += 2.0 * M_PI;
  return p;
}

}  // namespace

Tuning Tuning::from_atom(Complex alpha, Complex beta, double r) {
  if (r <= 0.0) {
    throw ValidationError("tuning", "coupling ratio r must be positive");
  }
  const double norm2 = std::norm(alpha) + std::norm(beta);
  if (std::abs(norm2 - 1.0) > 1e-12) {
    throw ValidationError("tuning", "atom state not normalized, |a|^2+|b|^2 = " +
                                        std::to_string(norm2));
  }
  if (beta == Complex{0.0, 0.0}) {
    throw DegenerateAtom(
        "beta = 0: tuning parameter undefined (|theta| -> pi/2 limit)");
  }
  return Tuning{alpha, beta, r, alpha / (beta * r)};
}

Tuning Tuning::from_kappa(Complex kappa) {
  const double beta = 1.0 / std::sqrt(1.0 + std::norm(kappa));
  return Tuning{kappa * beta, beta, 1.0, kappa};
}

Complex LambdaPolar::lambda() const {
  return theta_abs * std::exp(Complex{0.0, -phi});
}

LambdaPolar tuning_to_lambda(const Tuning& t) {
  if (t.beta == Complex{0.0, 0.0}) {
    throw DegenerateAtom("beta = 0: tuning parameter undefined");
  }
  const Complex kappa = t.kappa;
  LambdaPolar out;
  out.theta_abs = std::atan(std::abs(kappa));
  out.phi = (kappa == Complex{0.0, 0.0}) ? 0.0 : std::arg(kappa);
  return out;
}

BeamSplitter::BeamSplitter(LambdaPolar lambda, int n_max) : lambda_(lambda) {
  lambda_.phi = wrap_phase(lambda_.phi);
  blocks_.reserve(n_max + 1);
  const Complex lam = lambda_.lambda();
  for (int total = 0; total <= n_max; ++total) {
    const int dim = FockCutoff::block_dim(total);
    if (lam == Complex{0.0, 0.0}) {
      blocks_.push_back(Eigen::MatrixXcd::Identity(dim, dim));
      continue;
    }
    const Eigen::MatrixXcd t = mode_exchange_block(total);
    // generator lam*t - conj(lam)*t^dag is skew-Hermitian; exponentiate via
    // the Hermitian matrix i*generator
    const Eigen::MatrixXcd h =
        Complex{0.0, 1.0} * (lam * t - std::conj(lam) * t.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
    Eigen::VectorXcd phase(dim);
    for (int i = 0; i < dim; ++i) {
      phase(i) = std::exp(Complex{0.0, -solver.eigenvalues()(i)});
    }
    blocks_.push_back(solver.eigenvectors() * phase.asDiagonal() *
                      solver.eigenvectors().adjoint());
  }
}

double BeamSplitter::max_unitarity_error() const {
  double err = 0.0;
  for (const auto& u : blocks_) {
    const Eigen::MatrixXcd dev =
        u.adjoint() * u - Eigen::MatrixXcd::Identity(u.rows(), u.cols());
    err = std::max(err, dev.cwiseAbs().maxCoeff());
  }
  return err;
}

BeamSplitter build_beam_splitter(double theta_abs, double phi, int n_max) {
  if (theta_abs < 0.0 || theta_abs >= M_PI / 2.0) {
    throw ValidationError("beam_splitter", "|theta| must lie in [0, pi/2)");
  }
  return BeamSplitter(LambdaPolar{theta_abs, phi}, n_max);
}

BeamSplitter build_beam_splitter(const Tuning& t, int n_max) {
  return BeamSplitter(tuning_to_lambda(t), n_max);
}

BeamSplitter beam_splitter_for_kappa(Complex kappa, int n_max) {
  return build_beam_splitter(Tuning::from_kappa(kappa), n_max);
}

TwoModeVector apply(const BeamSplitter& bs, const TwoModeVector& v) {
  if (bs.n_max() != v.n_max()) {
    throw DimensionMismatch("beam splitter and state cutoffs differ");
  }
  TwoModeVector out(v.cutoff());
  for (int n = 0; n <= v.n_max(); ++n) {
    out.block(n) = bs.block(n) * v.block(n);
  }
  return out;
}

TwoModeState apply(const BeamSplitter& bs, const TwoModeState& state) {
  if (bs.n_max() != state.n_max()) {
    throw DimensionMismatch("beam splitter and state cutoffs differ");
  }
  TwoModeState out(state.cutoff());
  for (const auto& [key, b] : state.blocks()) {
    out.set_block(key.first, key.second,
                  bs.block(key.first) * b * bs.block(key.second).adjoint());
  }
  return out;
}

ConversionFractions conversion_fractions(Complex kappa) {
  const double k2 = std::norm(kappa);
  return ConversionFractions{k2 / (1.0 + k2), 1.0 / (1.0 + k2)};
}

}  // namespace qbsim

#pragma once

#include <vector>

#include "qbsim/fock.hpp"

namespace qbsim {

// Cavity tuning kappa = alpha/(beta r), set by the injected-atom amplitudes
// and the coupling-constant ratio.
struct Tuning {
  Complex alpha;
  Complex beta;
  double r = 1.0;
  Complex kappa;

  static Tuning from_atom(Complex alpha, Complex beta, double r);
  // Representative atom state: r = 1, beta = 1/sqrt(1+|k|^2), alpha = k*beta.
  static Tuning from_kappa(Complex kappa);
};

struct LambdaPolar {
  double theta_abs = 0.0;  // in [0, pi/2)
  double phi = 0.0;        // in (-pi, pi]
  Complex lambda() const;  // |theta| e^{-i phi}
};

/// Solve e^{i phi} tan|theta| = kappa. Throws DegenerateAtom when beta = 0.
LambdaPolar tuning_to_lambda(const Tuning& t);

// Two-mode beam splitter S = exp(lambda a1^dag a2 - conj(lambda) a2^dag a1).
// The generator conserves total photon number, so S is one unitary per block;
// each is obtained by eigendecomposition of the Hermitian matrix i*generator.
class BeamSplitter {
 public:
  BeamSplitter(LambdaPolar lambda, int n_max);

  double theta_abs() const { return lambda_.theta_abs; }
  double phi() const { return lambda_.phi; }
  Complex lambda() const { return lambda_.lambda(); }
  int n_max() const { return static_cast<int>(blocks_.size()) - 1; }

  const Eigen::MatrixXcd& block(int total) const { return blocks_.at(total); }

  // max_N max_ij |U_N^dag U_N - I|
  double max_unitarity_error() const;

 private:
  LambdaPolar lambda_;
  std::vector<Eigen::MatrixXcd> blocks_;
};

BeamSplitter build_beam_splitter(double theta_abs, double phi, int n_max);
BeamSplitter build_beam_splitter(const Tuning& t, int n_max);
BeamSplitter beam_splitter_for_kappa(Complex kappa, int n_max);

TwoModeVector apply(const BeamSplitter& bs, const TwoModeVector& v);
// S rho S^dag
TwoModeState apply(const BeamSplitter& bs, const TwoModeState& state);

struct ConversionFractions {
  double down = 0.0;  // |k|^2/(1+|k|^2): mode-1 photons converted to mode 2
  double up = 0.0;    // 1/(1+|k|^2)
};

ConversionFractions conversion_fractions(Complex kappa);

}  // namespace qbsim

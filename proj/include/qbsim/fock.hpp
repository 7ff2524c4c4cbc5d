#pragma once

#include <complex>
#include <map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qbsim/errors.hpp"

namespace qbsim {

using Complex = std::complex<double>;

inline constexpr double kDefaultTailTol = 1e-10;

// Truncation by total photon number: basis {|n1,n2> : n1+n2 <= n_max}.
// Block N (total photons N) has dimension N+1; within a block the basis is
// ordered |N-j, j> with j the photon number of mode two.
struct FockCutoff {
  int n_max = 0;

  int dimension() const { return (n_max + 1) * (n_max + 2) / 2; }
  static int block_dim(int total) { return total + 1; }
  static int block_offset(int total) { return total * (total + 1) / 2; }

  bool operator==(const FockCutoff&) const = default;
};

// Pure two-mode state stored as one amplitude vector per total-photon block.
class TwoModeVector {
 public:
  TwoModeVector() = default;
  explicit TwoModeVector(FockCutoff cutoff);

  FockCutoff cutoff() const { return cutoff_; }
  int n_max() const { return cutoff_.n_max; }

  const Eigen::VectorXcd& block(int total) const;
  Eigen::VectorXcd& block(int total);

  Complex amplitude(int n1, int n2) const;
  void set_amplitude(int n1, int n2, Complex value);

  double squared_norm() const;
  double norm() const;
  void normalize();

  Eigen::VectorXcd to_dense() const;

 private:
  FockCutoff cutoff_;
  std::vector<Eigen::VectorXcd> blocks_;
};

// Density operator on the truncated two-mode space. Stored as a map from
// (row block, column block) to a dense (N+1)x(M+1) matrix; absent blocks are
// zero. Block-diagonal states (number-state mixtures, channel outputs from
// block-diagonal inputs) carry only diagonal blocks; coherent inputs also
// populate the cross blocks.
class TwoModeState {
 public:
  using BlockKey = std::pair<int, int>;
  using BlockMap = std::map<BlockKey, Eigen::MatrixXcd>;

  TwoModeState() = default;
  explicit TwoModeState(FockCutoff cutoff) : cutoff_(cutoff) {}

  FockCutoff cutoff() const { return cutoff_; }
  int n_max() const { return cutoff_.n_max; }

  const BlockMap& blocks() const { return blocks_; }
  bool has_block(int row, int col) const;
  const Eigen::MatrixXcd* find_block(int row, int col) const;
  Eigen::MatrixXcd block_or_zero(int row, int col) const;
  void set_block(int row, int col, Eigen::MatrixXcd value);

  bool block_diagonal() const;

  // this += weight * |v><v|
  void add_outer(double weight, const TwoModeVector& v);
  // this += weight * other
  void add_scaled(double weight, const TwoModeState& other);

  double trace_real() const;
  Complex trace() const;
  double purity() const;

  // Probability of total photon number N, i.e. tr(rho Pi_N).
  Eigen::VectorXd total_photon_distribution() const;

  Eigen::MatrixXcd to_dense() const;
  static TwoModeState from_dense(FockCutoff cutoff, const Eigen::MatrixXcd& dense);

  // max_ij |rho - rho^dagger|
  double hermiticity_error() const;
  // smallest eigenvalue of the dense realization
  double min_eigenvalue() const;
  void validate(double herm_tol = 1e-12, double trace_tol = 1e-10,
                double psd_tol = 1e-10) const;

 private:
  FockCutoff cutoff_;
  BlockMap blocks_;
};

struct SingleModeState {
  Eigen::MatrixXcd matrix;

  int n_max() const { return static_cast<int>(matrix.rows()) - 1; }
  double trace_real() const { return matrix.trace().real(); }
  double purity() const;
  Eigen::VectorXd photon_distribution() const;
  double hermiticity_error() const;
  double min_eigenvalue() const;
  void validate(double herm_tol = 1e-12, double trace_tol = 1e-10,
                double psd_tol = 1e-10) const;
};

struct CoherentTerm {
  double weight = 0.0;
  Complex gamma;
};

// Finite weighted list of coherent amplitudes standing in for a P-function.
// Weights must sum to one; negative weights are allowed as long as the
// realized density matrix stays positive. Exact zero-weight terms are pruned.
class CoherentMixture {
 public:
  explicit CoherentMixture(std::vector<CoherentTerm> terms);

  static CoherentMixture single(Complex gamma) {
    return CoherentMixture({{1.0, gamma}});
  }

  const std::vector<CoherentTerm>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  CoherentMixture with_scaled_amplitudes(Complex factor) const;

 private:
  std::vector<CoherentTerm> terms_;
};

enum class Mode { one = 1, two = 2 };

// ---- constructors ----

/// Truncated coherent state |gamma>: c_n = e^{-|g|^2/2} g^n / sqrt(n!),
/// renormalized. The discarded tail mass is written to tail_out if given;
/// throws TailTooLarge when it exceeds tail_tol.
Eigen::VectorXcd coherent_vector(Complex gamma, int n_max,
                                 double tail_tol = kDefaultTailTol,
                                 double* tail_out = nullptr);

/// Tensor product of two single-mode vectors, truncated to n1+n2 <= n_max.
TwoModeVector product_vector(const Eigen::VectorXcd& mode1,
                             const Eigen::VectorXcd& mode2, int n_max,
                             double tail_tol = kDefaultTailTol,
                             double* tail_out = nullptr);

/// |gamma>_1 (x) |0>_2 at the given cutoff.
TwoModeVector coherent_vacuum_vector(Complex gamma, int n_max,
                                     double tail_tol = kDefaultTailTol);

TwoModeState pure_state(const TwoModeVector& v);

TwoModeState product_state(const Eigen::VectorXcd& mode1,
                           const Eigen::VectorXcd& mode2, int n_max,
                           double tail_tol = kDefaultTailTol);

/// Sum_k w_k |g_k><g_k| (x) |0><0|. Positivity of the realized matrix is
/// checked through the Gram matrix of the coherent vectors, which carries the
/// full nonzero spectrum; throws NotPositive below -1e-8.
TwoModeState mixture_state(const CoherentMixture& mix, int n_max,
                           double tail_tol = kDefaultTailTol);

// ---- reductions and metrics ----

SingleModeState partial_trace(const TwoModeState& state, Mode keep);

double trace_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);
double trace_distance(const TwoModeState& a, const TwoModeState& b);
double trace_distance(const SingleModeState& a, const SingleModeState& b);

double fidelity_pure(const Eigen::VectorXcd& psi, const Eigen::MatrixXcd& rho);
double fidelity_pure(const TwoModeVector& psi, const TwoModeState& rho);

Complex overlap(const Eigen::VectorXcd& psi, const Eigen::VectorXcd& phi);
Complex overlap(const TwoModeVector& psi, const TwoModeVector& phi);

// ---- expectation values ----

double expect_total_photons(const TwoModeState& state);
double expect_photons(const TwoModeState& state, Mode mode);
double expect_photons(const SingleModeState& state);
Complex expect_annihilation(const SingleModeState& state);
// tr(rho a_1) on the two-mode state
Complex expect_mode1_annihilation(const TwoModeState& state);

}  // namespace qbsim

#include "qbsim/fock.hpp"

#include <algorithm>
#include <cmath>

namespace qbsim {

namespace {

void check_same_cutoff(const FockCutoff& a, const FockCutoff& b) {
  if (!(a == b)) {
    throw DimensionMismatch("states have different cutoffs: n_max " +
                            std::to_string(a.n_max) + " vs " +
                            std::to_string(b.n_max));
  }
}

double min_eigenvalue_of(const Eigen::MatrixXcd& m) {
  if (m.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m,
                                                         Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

}  // namespace

// ---- TwoModeVector ----

TwoModeVector::TwoModeVector(FockCutoff cutoff) : cutoff_(cutoff) {
  blocks_.reserve(cutoff.n_max + 1);
  for (int n = 0; n <= cutoff.n_max; ++n) {
    blocks_.push_back(Eigen::VectorXcd::Zero(FockCutoff::block_dim(n)));
  }
}

const Eigen::VectorXcd& TwoModeVector::block(int total) const {
  return blocks_.at(total);
}

Eigen::VectorXcd& TwoModeVector::block(int total) { return blocks_.at(total); }

Complex TwoModeVector::amplitude(int n1, int n2) const {
  const int total = n1 + n2;
  if (n1 < 0 || n2 < 0 || total > cutoff_.n_max) {
    throw DimensionMismatch("amplitude index outside the truncated basis");
  }
  return blocks_[total](n2);
}

void TwoModeVector::set_amplitude(int n1, int n2, Complex value) {
  const int total = n1 + n2;
  if (n1 < 0 || n2 < 0 || total > cutoff_.n_max) {
    throw DimensionMismatch("amplitude index outside the truncated basis");
  }
  blocks_[total](n2) = value;
}

double TwoModeVector::squared_norm() const {
  double s = 0.0;
  for (const auto& b : blocks_) s += b.squaredNorm();
  return s;
}

double TwoModeVector::norm() const { return std::sqrt(squared_norm()); }

void TwoModeVector::normalize() {
  const double n = norm();
  if (n == 0.0) {
    throw DegenerateSeed("cannot normalize the zero vector");
  }
  for (auto& b : blocks_) b /= n;
}

Eigen::VectorXcd TwoModeVector::to_dense() const {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(cutoff_.dimension());
  for (int n = 0; n <= cutoff_.n_max; ++n) {
    out.segment(FockCutoff::block_offset(n), FockCutoff::block_dim(n)) =
        blocks_[n];
  }
  return out;
}

// ---- TwoModeState ----

bool TwoModeState::has_block(int row, int col) const {
  return blocks_.count({row, col}) > 0;
}

const Eigen::MatrixXcd* TwoModeState::find_block(int row, int col) const {
  auto it = blocks_.find({row, col});
  return it == blocks_.end() ? nullptr : &it->second;
}

Eigen::MatrixXcd TwoModeState::block_or_zero(int row, int col) const {
  if (const auto* b = find_block(row, col)) return *b;
  return Eigen::MatrixXcd::Zero(FockCutoff::block_dim(row),
                                FockCutoff::block_dim(col));
}

void TwoModeState::set_block(int row, int col, Eigen::MatrixXcd value) {
  if (row < 0 || col < 0 || row > cutoff_.n_max || col > cutoff_.n_max) {
    throw DimensionMismatch("block index outside the cutoff");
  }
  if (value.rows() != FockCutoff::block_dim(row) ||
      value.cols() != FockCutoff::block_dim(col)) {
    throw DimensionMismatch("block shape does not match its photon sector");
  }
  blocks_[{row, col}] = std::move(value);
}

bool TwoModeState::block_diagonal() const {
  return std::all_of(blocks_.begin(), blocks_.end(), [](const auto& kv) {
    return kv.first.first == kv.first.second;
  });
}

void TwoModeState::add_outer(double weight, const TwoModeVector& v) {
  check_same_cutoff(cutoff_, v.cutoff());
  std::vector<int> support;
  for (int n = 0; n <= cutoff_.n_max; ++n) {
    if (v.block(n).squaredNorm() != 0.0) support.push_back(n);
  }
  for (const int n : support) {
    for (const int m : support) {
      auto it = blocks_.find({n, m});
      if (it == blocks_.end()) {
        it = blocks_
                 .emplace(BlockKey{n, m},
                          Eigen::MatrixXcd::Zero(FockCutoff::block_dim(n),
                                                 FockCutoff::block_dim(m)))
                 .first;
      }
      it->second.noalias() += weight * v.block(n) * v.block(m).adjoint();
    }
  }
}

void TwoModeState::add_scaled(double weight, const TwoModeState& other) {
  check_same_cutoff(cutoff_, other.cutoff_);
  for (const auto& [key, b] : other.blocks_) {
    auto it = blocks_.find(key);
    if (it == blocks_.end()) {
      blocks_.emplace(key, weight * b);
    } else {
      it->second += weight * b;
    }
  }
}

double TwoModeState::trace_real() const { return trace().real(); }

Complex TwoModeState::trace() const {
  Complex t = 0.0;
  for (int n = 0; n <= cutoff_.n_max; ++n) {
    if (const auto* b = find_block(n, n)) t += b->trace();
  }
  return t;
}

double TwoModeState::purity() const {
  // tr(rho^2) = sum_{N,M} tr(B_{NM} B_{MN}); for Hermitian rho each pair
  // contributes |B_{NM}|_F^2.
  double p = 0.0;
  for (const auto& [key, b] : blocks_) {
    const auto* partner = find_block(key.second, key.first);
    if (partner == nullptr) continue;
    p += (b * (*partner)).trace().real();
  }
  return p;
}

Eigen::VectorXd TwoModeState::total_photon_distribution() const {
  Eigen::VectorXd dist = Eigen::VectorXd::Zero(cutoff_.n_max + 1);
  for (int n = 0; n <= cutoff_.n_max; ++n) {
    if (const auto* b = find_block(n, n)) dist(n) = b->trace().real();
  }
  return dist;
}

Eigen::MatrixXcd TwoModeState::to_dense() const {
  const int dim = cutoff_.dimension();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [key, b] : blocks_) {
    out.block(FockCutoff::block_offset(key.first),
              FockCutoff::block_offset(key.second), b.rows(), b.cols()) = b;
  }
  return out;
}

TwoModeState TwoModeState::from_dense(FockCutoff cutoff,
                                      const Eigen::MatrixXcd& dense) {
  if (dense.rows() != cutoff.dimension() || dense.cols() != cutoff.dimension()) {
    throw DimensionMismatch("dense matrix does not match the cutoff dimension");
  }
  TwoModeState state(cutoff);
  for (int n = 0; n <= cutoff.n_max; ++n) {
    for (int m = 0; m <= cutoff.n_max; ++m) {
      Eigen::MatrixXcd b = dense.block(FockCutoff::block_offset(n),
                                       FockCutoff::block_offset(m),
                                       FockCutoff::block_dim(n),
                                       FockCutoff::block_dim(m));
      if (b.cwiseAbs().maxCoeff() > 0.0) state.set_block(n, m, std::move(b));
    }
  }
  return state;
}

double TwoModeState::hermiticity_error() const {
  double err = 0.0;
  for (const auto& [key, b] : blocks_) {
    const Eigen::MatrixXcd partner = block_or_zero(key.second, key.first);
    err = std::max(err, (b - partner.adjoint()).cwiseAbs().maxCoeff());
  }
  return err;
}

double TwoModeState::min_eigenvalue() const {
  return min_eigenvalue_of(to_dense());
}

void TwoModeState::validate(double herm_tol, double trace_tol,
                            double psd_tol) const {
  const double herm = hermiticity_error();
  if (herm > herm_tol) {
    throw ValidationError("two_mode_state",
                          "hermiticity error " + std::to_string(herm));
  }
  const double tr = trace_real();
  if (std::abs(tr - 1.0) > trace_tol) {
    throw ValidationError("two_mode_state", "trace " + std::to_string(tr));
  }
  const double min_eig = min_eigenvalue();
  if (min_eig < -psd_tol) {
    throw NotPositive(min_eig);
  }
}

// ---- SingleModeState ----

double SingleModeState::purity() const {
  return (matrix * matrix).trace().real();
}

Eigen::VectorXd SingleModeState::photon_distribution() const {
  return matrix.diagonal().real();
}

double SingleModeState::hermiticity_error() const {
  return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
}

double SingleModeState::min_eigenvalue() const {
  return min_eigenvalue_of(matrix);
}

void SingleModeState::validate(double herm_tol, double trace_tol,
                               double psd_tol) const {
  const double herm = hermiticity_error();
  if (herm > herm_tol) {
    throw ValidationError("single_mode_state",
                          "hermiticity error " + std::to_string(herm));
  }
  if (std::abs(trace_real() - 1.0) > trace_tol) {
    throw ValidationError("single_mode_state",
                          "trace " + std::to_string(trace_real()));
  }
  const double min_eig = min_eigenvalue();
  if (min_eig < -psd_tol) {
    throw NotPositive(min_eig);
  }
}

// ---- CoherentMixture ----

CoherentMixture::CoherentMixture(std::vector<CoherentTerm> terms) {
  double sum = 0.0;
  for (const auto& t : terms) {
    sum += t.weight;
    if (t.weight != 0.0) terms_.push_back(t);
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw ValidationError("coherent_mixture",
                          "weights sum to " + std::to_string(sum));
  }
  if (terms_.empty()) {
    throw ValidationError("coherent_mixture", "no terms with nonzero weight");
  }
}

CoherentMixture CoherentMixture::with_scaled_amplitudes(Complex factor) const {
  std::vector<CoherentTerm> scaled = terms_;
  for (auto& t : scaled) t.gamma *= factor;
  return CoherentMixture(std::move(scaled));
}

// ---- constructors ----

Eigen::VectorXcd coherent_vector(Complex gamma, int n_max, double tail_tol,
                                 double* tail_out) {
  if (n_max < 0) {
    throw DimensionMismatch("n_max must be nonnegative");
  }
  Eigen::VectorXcd c(n_max + 1);
  c(0) = std::exp(-std::norm(gamma) / 2.0);
  for (int n = 1; n <= n_max; ++n) {
    c(n) = c(n - 1) * gamma / std::sqrt(static_cast<double>(n));
  }
  const double kept = c.squaredNorm();
  const double tail = std::max(0.0, 1.0 - kept);
  if (tail_out != nullptr) *tail_out = tail;
  if (tail > tail_tol) {
    throw TailTooLarge(tail, tail_tol);
  }
  c /= std::sqrt(kept);
  return c;
}

TwoModeVector product_vector(const Eigen::VectorXcd& mode1,
                             const Eigen::VectorXcd& mode2, int n_max,
                             double tail_tol, double* tail_out) {
  TwoModeVector out{FockCutoff{n_max}};
  double kept = 0.0;
  double dropped = 0.0;
  for (int n1 = 0; n1 < mode1.size(); ++n1) {
    for (int n2 = 0; n2 < mode2.size(); ++n2) {
      const Complex a = mode1(n1) * mode2(n2);
      if (n1 + n2 <= n_max) {
        out.block(n1 + n2)(n2) = a;
        kept += std::norm(a);
      } else {
        dropped += std::norm(a);
      }
    }
  }
  // also count what the input vectors themselves had already lost
  const double input_deficit =
      std::max(0.0, 1.0 - mode1.squaredNorm() * mode2.squaredNorm());
  const double tail = dropped + input_deficit;
  if (tail_out != nullptr) *tail_out = tail;
  if (tail > tail_tol) {
    throw TailTooLarge(tail, tail_tol);
  }
  if (kept == 0.0) {
    throw DegenerateSeed("product state has no support below the cutoff");
  }
  const double scale = 1.0 / std::sqrt(kept);
  for (int n = 0; n <= n_max; ++n) out.block(n) *= scale;
  return out;
}

TwoModeVector coherent_vacuum_vector(Complex gamma, int n_max, double tail_tol) {
  const Eigen::VectorXcd c = coherent_vector(gamma, n_max, tail_tol);
  Eigen::VectorXcd vac = Eigen::VectorXcd::Zero(1);
  vac(0) = 1.0;
  return product_vector(c, vac, n_max, tail_tol);
}

TwoModeState pure_state(const TwoModeVector& v) {
  TwoModeState state(v.cutoff());
  state.add_outer(1.0, v);
  return state;
}

TwoModeState product_state(const Eigen::VectorXcd& mode1,
                           const Eigen::VectorXcd& mode2, int n_max,
                           double tail_tol) {
  return pure_state(product_vector(mode1, mode2, n_max, tail_tol));
}

TwoModeState mixture_state(const CoherentMixture& mix, int n_max,
                           double tail_tol) {
  const auto& terms = mix.terms();
  const int k = static_cast<int>(terms.size());
  std::vector<TwoModeVector> vectors;
  vectors.reserve(k);
  for (const auto& t : terms) {
    vectors.push_back(coherent_vacuum_vector(t.gamma, n_max, tail_tol));
  }

  // Nonzero spectrum of sum_k w_k |v_k><v_k| equals the spectrum of
  // G^{1/2} W G^{1/2} with G the Gram matrix of the vectors, so signed
  // mixtures can be screened without touching the full space.
  if (k > 1) {
    Eigen::MatrixXcd gram(k, k);
    for (int a = 0; a < k; ++a) {
      for (int b = 0; b < k; ++b) {
        gram(a, b) = overlap(vectors[a], vectors[b]);
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> gsolver(gram);
    const Eigen::VectorXd gvals = gsolver.eigenvalues().cwiseMax(0.0);
    const Eigen::MatrixXcd sqrt_gram = gsolver.eigenvectors() *
                                       gvals.cwiseSqrt().asDiagonal() *
                                       gsolver.eigenvectors().adjoint();
    Eigen::VectorXd weights(k);
    for (int a = 0; a < k; ++a) weights(a) = terms[a].weight;
    const Eigen::MatrixXcd sandwich =
        sqrt_gram * weights.asDiagonal() * sqrt_gram;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ssolver(
        sandwich, Eigen::EigenvaluesOnly);
    const double min_eig = ssolver.eigenvalues().minCoeff();
    if (min_eig < -1e-8) {
      throw NotPositive(min_eig);
    }
  } else if (terms[0].weight < 0.0) {
    throw NotPositive(terms[0].weight);
  }

  TwoModeState state{FockCutoff{n_max}};
  for (int a = 0; a < k; ++a) {
    state.add_outer(terms[a].weight, vectors[a]);
  }
  return state;
}

// ---- reductions and metrics ----

SingleModeState partial_trace(const TwoModeState& state, Mode keep) {
  const int n_max = state.n_max();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n_max + 1, n_max + 1);
  for (const auto& [key, b] : state.blocks()) {
    const auto [n, m] = key;
    if (keep == Mode::one) {
      // entries with equal mode-2 photon number j: |n-j><m-j| picks up B(j,j)
      for (int j = 0; j <= std::min(n, m); ++j) {
        out(n - j, m - j) += b(j, j);
      }
    } else {
      // equal mode-1 photon number: row j pairs with column j - n + m
      for (int j = std::max(0, n - m); j <= n && j - n + m <= m; ++j) {
        out(j, j - n + m) += b(j, j - n + m);
      }
    }
  }
  return SingleModeState{std::move(out)};
}

double trace_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionMismatch("trace distance between different dimensions");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(a - b,
                                                         Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

double trace_distance(const TwoModeState& a, const TwoModeState& b) {
  check_same_cutoff(a.cutoff(), b.cutoff());
  return trace_distance(a.to_dense(), b.to_dense());
}

double trace_distance(const SingleModeState& a, const SingleModeState& b) {
  return trace_distance(a.matrix, b.matrix);
}

double fidelity_pure(const Eigen::VectorXcd& psi, const Eigen::MatrixXcd& rho) {
  if (psi.size() != rho.rows()) {
    throw DimensionMismatch("fidelity between different dimensions");
  }
  return (psi.adjoint() * rho * psi)(0, 0).real();
}

double fidelity_pure(const TwoModeVector& psi, const TwoModeState& rho) {
  check_same_cutoff(psi.cutoff(), rho.cutoff());
  Complex value = 0.0;
  for (const auto& [key, b] : rho.blocks()) {
    value += (psi.block(key.first).adjoint() * b * psi.block(key.second)).value();
  }
  return value.real();
}

Complex overlap(const Eigen::VectorXcd& psi, const Eigen::VectorXcd& phi) {
  if (psi.size() != phi.size()) {
    throw DimensionMismatch("overlap between different dimensions");
  }
  return psi.dot(phi);  // conjugates psi
}

Complex overlap(const TwoModeVector& psi, const TwoModeVector& phi) {
  check_same_cutoff(psi.cutoff(), phi.cutoff());
  Complex value = 0.0;
  for (int n = 0; n <= psi.n_max(); ++n) {
    value += psi.block(n).dot(phi.block(n));
  }
  return value;
}

// ---- expectation values ----

double expect_total_photons(const TwoModeState& state) {
  double value = 0.0;
  for (int n = 0; n <= state.n_max(); ++n) {
    if (const auto* b = state.find_block(n, n)) {
      value += n * b->trace().real();
    }
  }
  return value;
}

double expect_photons(const TwoModeState& state, Mode mode) {
  double value = 0.0;
  for (int n = 0; n <= state.n_max(); ++n) {
    if (const auto* b = state.find_block(n, n)) {
      for (int j = 0; j <= n; ++j) {
        const double occupancy = (mode == Mode::two) ? j : (n - j);
        value += occupancy * b->diagonal()(j).real();
      }
    }
  }
  return value;
}

double expect_photons(const SingleModeState& state) {
  double value = 0.0;
  for (int n = 0; n <= state.n_max(); ++n) {
    value += n * state.matrix(n, n).real();
  }
  return value;
}

Complex expect_annihilation(const SingleModeState& state) {
  Complex value = 0.0;
  for (int n = 1; n <= state.n_max(); ++n) {
    value += std::sqrt(static_cast<double>(n)) * state.matrix(n, n - 1);
  }
  return value;
}

Complex expect_mode1_annihilation(const TwoModeState& state) {
  // tr(rho a1) = sum sqrt(n1) <n1,n2|rho|n1-1,n2>, entries of blocks (N, N-1)
  Complex value = 0.0;
  for (int n = 1; n <= state.n_max(); ++n) {
    if (const auto* b = state.find_block(n, n - 1)) {
      for (int j = 0; j <= n - 1; ++j) {
        value += std::sqrt(static_cast<double>(n - j)) * (*b)(j, j);
      }
    }
  }
  return value;
}

}  // namespace qbsim

#pragma once

// Exact small-dimension quantum objects: pure states, density operators,
// POVM effects, qubit observables, and the Hilbert-space overlap quantities
// built from them. Everything is immutable after construction and all
// operations are pure functions, so unrestricted parallel use is safe.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace ontoscope {

using Complex = std::complex<double>;

// Invariant tolerance: floating-point drift below this passes untouched.
inline constexpr double kNormTol = 1e-10;
// Constructors renormalize inputs off by at most this much, reject otherwise.
inline constexpr double kRenormLimit = 1e-6;
// Below this squared overlap a state pair is treated as orthogonal.
inline constexpr double kOrthoThreshold = 1e-8;

namespace detail {

inline double hermiticity_defect(const Eigen::MatrixXcd& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

inline Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigenvalue decomposition failed");
  return solver.eigenvalues();
}

}  // namespace detail

// A normalized pure state of a d-dimensional system, d >= 2.
class QuantumState {
 public:
  explicit QuantumState(Eigen::VectorXcd amplitudes)
      : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() < 2)
      throw std::invalid_argument("QuantumState: dimension must be >= 2");
    const double norm = amplitudes_.norm();
    if (std::abs(norm - 1.0) > kRenormLimit)
      throw std::invalid_argument("QuantumState: vector norm " +
                                  std::to_string(norm) +
                                  " too far from 1 to renormalize");
    if (std::abs(norm - 1.0) > kNormTol) amplitudes_ /= norm;
  }

  const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
  int dim() const { return static_cast<int>(amplitudes_.size()); }

  // Rank-1 density matrix |psi><psi|.
  Eigen::MatrixXcd projector() const {
    return amplitudes_ * amplitudes_.adjoint();
  }

 private:
  Eigen::VectorXcd amplitudes_;
};

// A mixed state: Hermitian, positive semidefinite, unit trace.
class DensityOperator {
 public:
  explicit DensityOperator(Eigen::MatrixXcd matrix) : matrix_(std::move(matrix)) {
    if (matrix_.rows() != matrix_.cols() || matrix_.rows() < 2)
      throw std::invalid_argument("DensityOperator: need a square matrix, d >= 2");
    if (detail::hermiticity_defect(matrix_) > kRenormLimit)
      throw std::invalid_argument("DensityOperator: matrix is not Hermitian");
    matrix_ = 0.5 * (matrix_ + matrix_.adjoint().eval());
    const double trace = matrix_.trace().real();
    if (std::abs(trace - 1.0) > kRenormLimit)
      throw std::invalid_argument("DensityOperator: trace " +
                                  std::to_string(trace) + " too far from 1");
    if (std::abs(trace - 1.0) > kNormTol) matrix_ /= trace;
    const double min_eig = detail::hermitian_eigenvalues(matrix_).minCoeff();
    if (min_eig < -kRenormLimit)
      throw std::invalid_argument("DensityOperator: negative eigenvalue " +
                                  std::to_string(min_eig));
  }

  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  int dim() const { return static_cast<int>(matrix_.rows()); }

  double purity() const { return (matrix_ * matrix_).trace().real(); }
  bool is_pure(double tol = kRenormLimit) const {
    return std::abs(purity() - 1.0) <= tol;
  }

 private:
  Eigen::MatrixXcd matrix_;
};

// A POVM element: Hermitian with spectrum in [0, 1].
class Effect {
 public:
  explicit Effect(Eigen::MatrixXcd matrix) : matrix_(std::move(matrix)) {
    if (matrix_.rows() != matrix_.cols() || matrix_.rows() < 2)
      throw std::invalid_argument("Effect: need a square matrix, d >= 2");
    if (detail::hermiticity_defect(matrix_) > kRenormLimit)
      throw std::invalid_argument("Effect: matrix is not Hermitian");
    matrix_ = 0.5 * (matrix_ + matrix_.adjoint().eval());
    const Eigen::VectorXd eigs = detail::hermitian_eigenvalues(matrix_);
    if (eigs.minCoeff() < -kRenormLimit || eigs.maxCoeff() > 1.0 + kRenormLimit)
      throw std::invalid_argument("Effect: spectrum outside [0, 1]");
  }

  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  int dim() const { return static_cast<int>(matrix_.rows()); }

 private:
  Eigen::MatrixXcd matrix_;
};

// A +/-1-valued qubit observable A = b . sigma with unit Bloch vector b.
class QubitObservable {
 public:
  explicit QubitObservable(Eigen::Vector3d bloch) : bloch_(std::move(bloch)) {
    const double norm = bloch_.norm();
    if (std::abs(norm - 1.0) > kRenormLimit)
      throw std::invalid_argument("QubitObservable: Bloch vector must be unit length");
    if (std::abs(norm - 1.0) > kNormTol) bloch_ /= norm;
    matrix_.resize(2, 2);
    matrix_ << Complex(bloch_.z(), 0.0), Complex(bloch_.x(), -bloch_.y()),
        Complex(bloch_.x(), bloch_.y()), Complex(-bloch_.z(), 0.0);
  }

  const Eigen::Matrix2cd& matrix() const { return matrix_; }
  const Eigen::Vector3d& bloch() const { return bloch_; }

 private:
  Eigen::Vector3d bloch_;
  Eigen::Matrix2cd matrix_;
};

// ---------------------------------------------------------------------------
// Constructions

inline QuantumState ket(std::initializer_list<Complex> amps) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(amps.size()));
  Eigen::Index i = 0;
  for (const Complex& a : amps) v[i++] = a;
  return QuantumState(v);
}

inline QuantumState ket0() { return ket({1.0, 0.0}); }
inline QuantumState ket1() { return ket({0.0, 1.0}); }
inline QuantumState ket_plus() { return ket({M_SQRT1_2, M_SQRT1_2}); }
inline QuantumState ket_minus() { return ket({M_SQRT1_2, -M_SQRT1_2}); }

// Qubit state with Bloch vector (sin t cos p, sin t sin p, cos t).
inline QuantumState state_from_angles(double theta, double phi) {
  Eigen::VectorXcd v(2);
  v[0] = Complex(std::cos(theta / 2.0), 0.0);
  v[1] = std::polar(std::sin(theta / 2.0), phi);
  return QuantumState(v);
}

inline QuantumState state_from_bloch(const Eigen::Vector3d& b) {
  const Eigen::Vector3d u = b.normalized();
  const double theta = std::acos(std::clamp(u.z(), -1.0, 1.0));
  const double phi = std::atan2(u.y(), u.x());
  return state_from_angles(theta, phi);
}

// Bloch vector <psi|sigma|psi> of a qubit state.
inline Eigen::Vector3d bloch_of(const QuantumState& psi) {
  if (psi.dim() != 2)
    throw std::invalid_argument("bloch_of: qubit states only");
  const Complex a = psi.amplitudes()[0];
  const Complex b = psi.amplitudes()[1];
  const Complex ab = std::conj(a) * b;
  return {2.0 * ab.real(), 2.0 * ab.imag(), std::norm(a) - std::norm(b)};
}

inline DensityOperator pure_density(const QuantumState& psi) {
  return DensityOperator(psi.projector());
}

inline DensityOperator maximally_mixed(int dim = 2) {
  return DensityOperator(Eigen::MatrixXcd::Identity(dim, dim) / double(dim));
}

inline Effect projector_effect(const QuantumState& psi) {
  return Effect(psi.projector());
}

// The pure state of a rank-1 density operator, or nullopt for mixed ones.
inline std::optional<QuantumState> pure_state_of(const DensityOperator& rho,
                                                 double tol = kRenormLimit) {
  if (!rho.is_pure(tol)) return std::nullopt;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho.matrix());
  if (solver.info() != Eigen::Success) return std::nullopt;
  const Eigen::Index top = rho.dim() - 1;  // eigenvalues sorted ascending
  if (std::abs(solver.eigenvalues()[top] - 1.0) > tol) return std::nullopt;
  return QuantumState(solver.eigenvectors().col(top));
}

// ---------------------------------------------------------------------------
// Operations

// |<a|b>|^2. Invariant under global phase on either argument.
inline double overlap_sq(const QuantumState& a, const QuantumState& b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("overlap_sq: dimension mismatch");
  const Complex inner = a.amplitudes().dot(b.amplitudes());
  return std::min(1.0, std::norm(inner));
}

// L_Q = 1 - sqrt(1 - |<a|b>|^2), i.e. one minus the pure-state trace distance.
// 1 for identical states, 0 for orthogonal ones.
inline double quantum_overlap(const QuantumState& a, const QuantumState& b) {
  const double s = overlap_sq(a, b);
  return 1.0 - std::sqrt(std::max(0.0, 1.0 - s));
}

// Tr(rho E). Clamps rounding spill at the [0, 1] boundaries, rejects anything
// further out as a broken input.
inline double born_probability(const DensityOperator& rho, const Effect& e) {
  if (rho.dim() != e.dim())
    throw std::invalid_argument("born_probability: dimension mismatch");
  const Complex tr = (rho.matrix() * e.matrix()).trace();
  if (std::abs(tr.imag()) > kRenormLimit)
    throw std::runtime_error("born_probability: trace has a non-real part");
  const double p = tr.real();
  constexpr double clamp_tol = 1e-9;
  if (p < -clamp_tol || p > 1.0 + clamp_tol)
    throw std::runtime_error("born_probability: value " + std::to_string(p) +
                             " outside [0, 1]");
  return std::clamp(p, 0.0, 1.0);
}

// The positive/negative eigenprojectors (I +/- A)/2 of a qubit observable.
inline std::pair<Effect, Effect> projectors_of(const QubitObservable& a) {
  const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  return {Effect(0.5 * (id + a.matrix())), Effect(0.5 * (id - a.matrix()))};
}

// Three qubit observables with coplanar Bloch vectors 120 degrees apart, so
// that A_1 + A_2 + A_3 = 0. Convention: vectors in the x-z plane at angles
// 2 pi t / 3 from +z, t = 0, 1, 2.
inline std::array<QubitObservable, 3> trine_observables() {
  std::array<QubitObservable, 3> out = {
      QubitObservable(Eigen::Vector3d(0.0, 0.0, 1.0)),
      QubitObservable(Eigen::Vector3d(std::sin(2.0 * M_PI / 3.0), 0.0,
                                      std::cos(2.0 * M_PI / 3.0))),
      QubitObservable(Eigen::Vector3d(std::sin(4.0 * M_PI / 3.0), 0.0,
                                      std::cos(4.0 * M_PI / 3.0)))};
  return out;
}

// Eigenstate of the +1 (positive = true) or -1 outcome of a qubit observable.
inline QuantumState eigenstate_of(const QubitObservable& a, bool positive) {
  return state_from_bloch(positive ? a.bloch() : Eigen::Vector3d(-a.bloch()));
}

}  // namespace ontoscope

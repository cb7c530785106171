#pragma once

// Two-level polarization algebra over the {H, V} basis.
//
// Dephasing in a linearly birefringent segment is a rotation about the
// sigma_z axis; a half-wave plate is a pi rotation about an equatorial axis.
// Everything is exact 2x2 complex arithmetic in double precision.

#include <complex>
#include <cstddef>
#include <span>
#include <string>

#include <Eigen/Dense>

namespace ddsim {

using Complex = std::complex<double>;
using Matrix2 = Eigen::Matrix2cd;
using Ket = Eigen::Vector2cd;

inline constexpr double kAlgebraTolerance = 1e-12;
inline constexpr double kPsdSlack = 1e-10;
// Trace renormalization cadence for long evolution chains.
inline constexpr std::size_t kRenormalizeEvery = 10000;

class DensityMatrix;

class PureState {
public:
  // Throws UsageError unless |alpha|^2 + |beta|^2 = 1 within kAlgebraTolerance.
  PureState(Complex alpha, Complex beta);

  // Scales (alpha, beta) to unit norm. Throws UsageError on a zero vector.
  static PureState normalized(Complex alpha, Complex beta);

  static PureState horizontal();
  static PureState vertical();
  static PureState diagonal();
  static PureState antidiagonal();
  static PureState right_circular();
  static PureState left_circular();

  Complex alpha() const noexcept { return alpha_; }
  Complex beta() const noexcept { return beta_; }
  Ket ket() const { return Ket(alpha_, beta_); }
  DensityMatrix projector() const;

private:
  Complex alpha_;
  Complex beta_;
};

class DensityMatrix {
public:
  // Validates Hermiticity, unit trace and positivity; throws UsageError.
  explicit DensityMatrix(const Matrix2& entries);

  static DensityMatrix maximally_mixed();

  // Skips validation. For results of operations that preserve the invariants.
  static DensityMatrix trusted(const Matrix2& entries);

  const Matrix2& matrix() const noexcept { return m_; }
  Complex operator()(Eigen::Index row, Eigen::Index col) const { return m_(row, col); }

  double trace() const;
  double purity() const;
  double min_eigenvalue() const;
  double max_hermitian_deviation() const;

  // Empty string when every invariant holds, otherwise a description.
  std::string invariant_violation() const;

private:
  struct TrustedTag {};
  DensityMatrix(const Matrix2& entries, TrustedTag) : m_(entries) {}

  Matrix2 m_;
};

class Unitary2 {
public:
  // Throws UsageError unless U U^dagger = I within kAlgebraTolerance.
  explicit Unitary2(const Matrix2& entries);

  static Unitary2 identity();
  static Unitary2 trusted(const Matrix2& entries);

  const Matrix2& matrix() const noexcept { return m_; }
  Complex operator()(Eigen::Index row, Eigen::Index col) const { return m_(row, col); }

  Unitary2 adjoint() const;
  double unitarity_deviation() const;

  // Apply `rhs` first, then `*this`.
  friend Unitary2 operator*(const Unitary2& lhs, const Unitary2& rhs);

private:
  struct TrustedTag {};
  Unitary2(const Matrix2& entries, TrustedTag) : m_(entries) {}

  Matrix2 m_;
};

/// exp(i * delta_phi * sigma_z / 2) = diag(e^{i delta_phi/2}, e^{-i delta_phi/2}).
Unitary2 dephasing_unitary(double delta_phi);

/// exp(-i (theta/2)(cos(phi) sigma_x + sin(phi) sigma_y)): rotation by
/// `rotation_angle` about the equatorial axis at `axis_phase`.
Unitary2 pulse_unitary(double axis_phase, double rotation_angle);

DensityMatrix evolve(const DensityMatrix& rho, const Unitary2& u);

/// Entrywise mean. Throws UsageError on an empty list.
DensityMatrix average_states(std::span<const DensityMatrix> states);

/// <psi| rho |psi>, clamped into [0, 1].
double fidelity(const PureState& initial, const DensityMatrix& rho_out);

// Repeated evolve() with trace renormalization every kRenormalizeEvery steps.
class EvolutionChain {
public:
  explicit EvolutionChain(DensityMatrix start) : rho_(std::move(start)) {}

  void apply(const Unitary2& u);
  const DensityMatrix& state() const noexcept { return rho_; }
  std::size_t steps() const noexcept { return steps_; }

private:
  DensityMatrix rho_;
  std::size_t steps_ = 0;
};

}  // namespace ddsim

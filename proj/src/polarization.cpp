#include "ddsim/polarization.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ddsim/errors.hpp"

namespace ddsim {

namespace {

void require_finite(double value, const char* name) {
  if (!std::isfinite(value)) {
    throw DomainError(std::string(name) + " must be finite");
  }
}

}  // namespace

PureState::PureState(Complex alpha, Complex beta) : alpha_(alpha), beta_(beta) {
  const double norm = std::norm(alpha) + std::norm(beta);
  if (!std::isfinite(norm) || std::abs(norm - 1.0) > kAlgebraTolerance) {
    std::ostringstream msg;
    msg << "pure state is not normalized: |alpha|^2 + |beta|^2 = " << norm;
    throw UsageError(msg.str());
  }
}

PureState PureState::normalized(Complex alpha, Complex beta) {
  const double norm = std::sqrt(std::norm(alpha) + std::norm(beta));
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw UsageError("cannot normalize a zero or non-finite amplitude pair");
  }
  return PureState(alpha / norm, beta / norm);
}

PureState PureState::horizontal() { return {1.0, 0.0}; }
PureState PureState::vertical() { return {0.0, 1.0}; }

PureState PureState::diagonal() {
  constexpr double r = std::numbers::sqrt2 / 2.0;
  return {r, r};
}

PureState PureState::antidiagonal() {
  constexpr double r = std::numbers::sqrt2 / 2.0;
  return {r, -r};
}

PureState PureState::right_circular() {
  constexpr double r = std::numbers::sqrt2 / 2.0;
  return {r, Complex(0.0, r)};
}

PureState PureState::left_circular() {
  constexpr double r = std::numbers::sqrt2 / 2.0;
  return {r, Complex(0.0, -r)};
}

DensityMatrix PureState::projector() const {
  const Ket k = ket();
  return DensityMatrix::trusted(k * k.adjoint());
}

// ---------------------------------------------------------------------------

DensityMatrix::DensityMatrix(const Matrix2& entries) : m_(entries) {
  if (auto problem = invariant_violation(); !problem.empty()) {
    throw UsageError("invalid density matrix: " + problem);
  }
}

DensityMatrix DensityMatrix::maximally_mixed() {
  Matrix2 m = Matrix2::Identity() * 0.5;
  return trusted(m);
}

DensityMatrix DensityMatrix::trusted(const Matrix2& entries) {
  return DensityMatrix(entries, TrustedTag{});
}

double DensityMatrix::trace() const { return (m_(0, 0) + m_(1, 1)).real(); }

double DensityMatrix::purity() const { return (m_ * m_).trace().real(); }

double DensityMatrix::min_eigenvalue() const {
  // Closed form for a 2x2 Hermitian matrix; uses the Hermitian part only.
  const double a = m_(0, 0).real();
  const double d = m_(1, 1).real();
  const Complex b = 0.5 * (m_(0, 1) + std::conj(m_(1, 0)));
  const double half_gap = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(b));
  return 0.5 * (a + d) - half_gap;
}

double DensityMatrix::max_hermitian_deviation() const {
  return (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
}

std::string DensityMatrix::invariant_violation() const {
  if (!m_.allFinite()) {
    return "non-finite entry";
  }
  std::ostringstream msg;
  if (const double dev = max_hermitian_deviation(); dev > kAlgebraTolerance) {
    msg << "not Hermitian (deviation " << dev << ")";
    return msg.str();
  }
  if (const double tr = trace(); std::abs(tr - 1.0) > kAlgebraTolerance) {
    msg << "trace " << tr << " != 1";
    return msg.str();
  }
  if (const double ev = min_eigenvalue(); ev < -kPsdSlack) {
    msg << "negative eigenvalue " << ev;
    return msg.str();
  }
  return {};
}

// ---------------------------------------------------------------------------

Unitary2::Unitary2(const Matrix2& entries) : m_(entries) {
  if (!m_.allFinite() || unitarity_deviation() > kAlgebraTolerance) {
    throw UsageError("matrix is not unitary");
  }
}

Unitary2 Unitary2::identity() { return trusted(Matrix2::Identity()); }

Unitary2 Unitary2::trusted(const Matrix2& entries) { return Unitary2(entries, TrustedTag{}); }

Unitary2 Unitary2::adjoint() const { return trusted(m_.adjoint()); }

double Unitary2::unitarity_deviation() const {
  return (m_ * m_.adjoint() - Matrix2::Identity()).cwiseAbs().maxCoeff();
}

Unitary2 operator*(const Unitary2& lhs, const Unitary2& rhs) {
  return Unitary2::trusted(lhs.m_ * rhs.m_);
}

// ---------------------------------------------------------------------------

Unitary2 dephasing_unitary(double delta_phi) {
  require_finite(delta_phi, "delta_phi");
  const Complex phase = std::polar(1.0, 0.5 * delta_phi);
  Matrix2 m;
  m << phase, 0.0, 0.0, std::conj(phase);
  return Unitary2::trusted(m);
}

Unitary2 pulse_unitary(double axis_phase, double rotation_angle) {
  require_finite(axis_phase, "axis_phase");
  require_finite(rotation_angle, "rotation_angle");
  const double c = std::cos(0.5 * rotation_angle);
  const double s = std::sin(0.5 * rotation_angle);
  const Complex minus_i(0.0, -1.0);
  Matrix2 m;
  m << c, minus_i * s * std::polar(1.0, -axis_phase),
      minus_i * s * std::polar(1.0, axis_phase), c;
  return Unitary2::trusted(m);
}

DensityMatrix evolve(const DensityMatrix& rho, const Unitary2& u) {
  const Matrix2& um = u.matrix();
  return DensityMatrix::trusted(um * rho.matrix() * um.adjoint());
}

DensityMatrix average_states(std::span<const DensityMatrix> states) {
  if (states.empty()) {
    throw UsageError("average_states: empty list");
  }
  Matrix2 sum = Matrix2::Zero();
  for (const auto& rho : states) {
    sum += rho.matrix();
  }
  return DensityMatrix::trusted(sum / static_cast<double>(states.size()));
}

double fidelity(const PureState& initial, const DensityMatrix& rho_out) {
  const Ket psi = initial.ket();
  const double f = (psi.adjoint() * rho_out.matrix() * psi)(0, 0).real();
  return std::clamp(f, 0.0, 1.0);
}

void EvolutionChain::apply(const Unitary2& u) {
  rho_ = evolve(rho_, u);
  if (++steps_ % kRenormalizeEvery == 0) {
    rho_ = DensityMatrix::trusted(rho_.matrix() / rho_.trace());
  }
}

}  // namespace ddsim

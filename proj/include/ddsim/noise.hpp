#pragma once

// Birefringence noise: the fiber is a chain of homogeneous segments, each
// adding a relative H/V phase delta_phi_j = (birefringence rate) * dL.

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "ddsim/rng.hpp"

namespace ddsim {

inline constexpr double kDefaultRayleighScaleDegPerM = 12.6;
inline constexpr double kDefaultCorrelationLengthM = 50.0;
inline constexpr double kGridTolerance = 1e-9;  // meters

class SegmentGrid {
public:
  // Uniform grid of `segment_count` segments covering `fiber_length_m`.
  SegmentGrid(double fiber_length_m, std::size_t segment_count);

  // Grid with `segments_per_interval` segments per inter-pulse spacing
  // tau = L / pulse_count; pulse positions tau/2 + k tau then sit on
  // boundaries. With no pulses the whole fiber counts as one interval.
  static SegmentGrid for_pulse_spacing(double fiber_length_m, std::size_t pulse_count,
                                       std::size_t segments_per_interval);

  double fiber_length_m() const noexcept { return fiber_length_m_; }
  double segment_length_m() const noexcept { return segment_length_m_; }
  std::size_t segment_count() const noexcept { return segment_count_; }

  double boundary_position(std::size_t index) const {
    return static_cast<double>(index) * segment_length_m_;
  }

  // Index i with |i * dL - position| <= kGridTolerance. Throws InternalError
  // when the position is not on a boundary.
  std::size_t boundary_index(double position_m) const;

private:
  double fiber_length_m_;
  double segment_length_m_;
  std::size_t segment_count_;
};

class NoiseProfile {
public:
  NoiseProfile() = default;
  // Entries must be finite; throws DomainError otherwise.
  explicit NoiseProfile(std::vector<double> phase_increments_rad);

  std::span<const double> phase_increments() const noexcept { return increments_; }
  std::size_t size() const noexcept { return increments_.size(); }
  double total_phase() const;

private:
  std::vector<double> increments_;
};

struct RayleighParams {
  double scale_deg_per_m = kDefaultRayleighScaleDegPerM;

  void validate() const;
};

// Rayleigh magnitudes held constant over correlation cells. Cell lengths are
// geometric with mean `correlation_length_m` (exponential autocorrelation);
// zero means an independent draw for every segment.
struct BirefringenceModel {
  RayleighParams rayleigh;
  double correlation_length_m = kDefaultCorrelationLengthM;

  void validate() const;
};

/// Inverse CDF x = sigma * sqrt(-2 ln u), u in (0, 1].
double rayleigh_from_uniform(double sigma, double u);

/// One phase-rate sample in degrees per meter.
double rayleigh_sample(const RayleighParams& params, RandomStream& stream);

/// Independent Rayleigh rate per segment.
NoiseProfile generate_profile(const SegmentGrid& grid, const RayleighParams& params,
                              RandomStream& stream);

NoiseProfile generate_profile(const SegmentGrid& grid, const BirefringenceModel& model,
                              RandomStream& stream);

/// Profile for prescribed per-segment phase rates (deg/m).
NoiseProfile profile_from_rates(const SegmentGrid& grid, std::span<const double> rates_deg_per_m);

/// Zero-mean Gaussian increments of variance `variance_rad2` per segment.
/// Analytic-check noise, not a fiber model.
NoiseProfile gaussian_increment_profile(const SegmentGrid& grid, double variance_rad2,
                                        RandomStream& stream);

/// Fidelity of |D> under the common-deviation dephasing envelope:
/// (1 + cos(n phi) exp(-n^2 var / 2)) / 2.
double free_evolution_fidelity_envelope(double mean_phase, double phase_variance,
                                        std::size_t segment_count);

/// "index,delta_phi_radians" per line.
void write_profile(std::ostream& out, const NoiseProfile& profile);

}  // namespace ddsim

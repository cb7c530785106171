#include "ddsim/noise.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <sstream>

#include "ddsim/errors.hpp"

namespace ddsim {

namespace {

constexpr double kRadPerDeg = std::numbers::pi / 180.0;

}  // namespace

SegmentGrid::SegmentGrid(double fiber_length_m, std::size_t segment_count)
    : fiber_length_m_(fiber_length_m), segment_count_(segment_count) {
  if (!(fiber_length_m > 0.0) || !std::isfinite(fiber_length_m)) {
    throw UsageError("fiber length must be positive and finite");
  }
  if (segment_count == 0) {
    throw UsageError("segment count must be positive");
  }
  segment_length_m_ = fiber_length_m / static_cast<double>(segment_count);
}

SegmentGrid SegmentGrid::for_pulse_spacing(double fiber_length_m, std::size_t pulse_count,
                                           std::size_t segments_per_interval) {
  if (segments_per_interval == 0) {
    throw UsageError("segments_per_interval must be >= 1");
  }
  const std::size_t intervals = pulse_count == 0 ? 1 : pulse_count;
  // tau/2 offsets need an even split of each interval.
  if (pulse_count > 0 && segments_per_interval % 2 != 0) {
    throw UsageError("segments_per_interval must be even when pulses are present");
  }
  return SegmentGrid(fiber_length_m, intervals * segments_per_interval);
}

std::size_t SegmentGrid::boundary_index(double position_m) const {
  const double ratio = position_m / segment_length_m_;
  const double nearest = std::round(ratio);
  if (nearest < 0.0 || nearest > static_cast<double>(segment_count_) ||
      std::abs(nearest * segment_length_m_ - position_m) > kGridTolerance) {
    std::ostringstream msg;
    msg << "position " << position_m << " m is not on a segment boundary (dL = "
        << segment_length_m_ << " m)";
    throw InternalError(msg.str());
  }
  return static_cast<std::size_t>(nearest);
}

// ---------------------------------------------------------------------------

NoiseProfile::NoiseProfile(std::vector<double> phase_increments_rad)
    : increments_(std::move(phase_increments_rad)) {
  for (double v : increments_) {
    if (!std::isfinite(v)) {
      throw DomainError("noise profile entries must be finite");
    }
  }
}

double NoiseProfile::total_phase() const {
  double sum = 0.0;
  for (double v : increments_) sum += v;
  return sum;
}

void RayleighParams::validate() const {
  if (!(scale_deg_per_m >= 0.0) || !std::isfinite(scale_deg_per_m)) {
    throw UsageError("rayleigh scale must be >= 0 and finite");
  }
}

void BirefringenceModel::validate() const {
  rayleigh.validate();
  if (!(correlation_length_m >= 0.0) || !std::isfinite(correlation_length_m)) {
    throw UsageError("correlation length must be >= 0 and finite");
  }
}

// ---------------------------------------------------------------------------

double rayleigh_from_uniform(double sigma, double u) {
  return sigma * std::sqrt(-2.0 * std::log(u));
}

double rayleigh_sample(const RayleighParams& params, RandomStream& stream) {
  return rayleigh_from_uniform(params.scale_deg_per_m, stream.uniform_open_closed());
}

NoiseProfile generate_profile(const SegmentGrid& grid, const RayleighParams& params,
                              RandomStream& stream) {
  return generate_profile(grid, BirefringenceModel{params, 0.0}, stream);
}

NoiseProfile generate_profile(const SegmentGrid& grid, const BirefringenceModel& model,
                              RandomStream& stream) {
  model.validate();
  const std::size_t n = grid.segment_count();
  const double dl = grid.segment_length_m();
  std::vector<double> increments(n);

  // Probability that the rate is redrawn at a given segment boundary.
  const double redraw =
      model.correlation_length_m > 0.0 ? -std::expm1(-dl / model.correlation_length_m) : 1.0;
  const double log_keep = redraw < 1.0 ? std::log1p(-redraw) : 0.0;

  std::size_t j = 0;
  while (j < n) {
    const double phase = rayleigh_sample(model.rayleigh, stream) * kRadPerDeg * dl;
    std::size_t run = 1;
    if (redraw < 1.0) {
      const double extra = std::floor(std::log(stream.uniform_open_closed()) / log_keep);
      const double remaining = static_cast<double>(n - j);
      run = extra + 1.0 >= remaining ? n - j : static_cast<std::size_t>(extra) + 1;
    }
    for (std::size_t k = 0; k < run; ++k) {
      increments[j + k] = phase;
    }
    j += run;
  }
  return NoiseProfile(std::move(increments));
}

NoiseProfile profile_from_rates(const SegmentGrid& grid, std::span<const double> rates_deg_per_m) {
  if (rates_deg_per_m.size() != grid.segment_count()) {
    throw UsageError("one phase rate per segment required");
  }
  std::vector<double> increments(rates_deg_per_m.size());
  for (std::size_t j = 0; j < increments.size(); ++j) {
    increments[j] = rates_deg_per_m[j] * kRadPerDeg * grid.segment_length_m();
  }
  return NoiseProfile(std::move(increments));
}

NoiseProfile gaussian_increment_profile(const SegmentGrid& grid, double variance_rad2,
                                        RandomStream& stream) {
  if (!(variance_rad2 >= 0.0)) {
    throw UsageError("variance must be >= 0");
  }
  const double sd = std::sqrt(variance_rad2);
  std::vector<double> increments(grid.segment_count());
  for (auto& v : increments) {
    v = sd * stream.standard_normal();
  }
  return NoiseProfile(std::move(increments));
}

double free_evolution_fidelity_envelope(double mean_phase, double phase_variance,
                                        std::size_t segment_count) {
  if (!(phase_variance >= 0.0)) {
    throw UsageError("phase variance must be >= 0");
  }
  const double n = static_cast<double>(segment_count);
  const double coherence = std::cos(n * mean_phase) * std::exp(-0.5 * n * n * phase_variance);
  return 0.5 * (1.0 + coherence);
}

void write_profile(std::ostream& out, const NoiseProfile& profile) {
  char buf[64];
  const auto values = profile.phase_increments();
  for (std::size_t j = 0; j < values.size(); ++j) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g\n", j, values[j]);
    out << buf;
  }
}

}  // namespace ddsim

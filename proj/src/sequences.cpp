#include "ddsim/sequences.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "ddsim/errors.hpp"

namespace ddsim {

namespace {

constexpr double kPi = std::numbers::pi;

void require_length(double fiber_length_m) {
  if (!(fiber_length_m > 0.0) || !std::isfinite(fiber_length_m)) {
    throw UsageError("fiber length must be positive and finite");
  }
}

// (2k + 1) L / (2N): tau/2 + k tau without accumulating rounding.
double pulse_position(double fiber_length_m, std::size_t k, std::size_t count) {
  return static_cast<double>(2 * k + 1) * fiber_length_m / static_cast<double>(2 * count);
}

}  // namespace

std::string_view to_string(SequenceKind kind) {
  switch (kind) {
    case SequenceKind::kFree: return "free";
    case SequenceKind::kCpmg: return "cpmg";
    case SequenceKind::kKdd: return "kdd";
  }
  return "unknown";
}

SequenceKind parse_sequence_kind(std::string_view name) {
  if (name == "free") return SequenceKind::kFree;
  if (name == "cpmg") return SequenceKind::kCpmg;
  if (name == "kdd") return SequenceKind::kKdd;
  throw UsageError("unknown sequence '" + std::string(name) + "' (expected free|cpmg|kdd)");
}

PulseSchedule::PulseSchedule(double fiber_length_m, std::vector<PulseEvent> events,
                             std::string name)
    : fiber_length_m_(fiber_length_m), events_(std::move(events)), name_(std::move(name)) {
  require_length(fiber_length_m);
  double previous = 0.0;
  for (const auto& e : events_) {
    if (!(e.position_m > previous) || !(e.position_m < fiber_length_m)) {
      throw UsageError("pulse positions must be strictly increasing inside (0, L)");
    }
    if (!std::isfinite(e.axis_phase_rad) || !std::isfinite(e.angle_rad)) {
      throw DomainError("pulse axis and angle must be finite");
    }
    previous = e.position_m;
  }
}

PulseSchedule PulseSchedule::with_angles(std::span<const double> angles_rad) const {
  if (angles_rad.size() != events_.size()) {
    throw UsageError("one angle per pulse required");
  }
  auto events = events_;
  for (std::size_t k = 0; k < events.size(); ++k) {
    events[k].angle_rad = angles_rad[k];
  }
  return PulseSchedule(fiber_length_m_, std::move(events), name_);
}

void PulseErrorModel::validate() const {
  if (!(sigma_fraction >= 0.0) || !std::isfinite(sigma_fraction)) {
    throw UsageError("pulse error sigma must be >= 0 and finite");
  }
}

PulseSchedule build_free(double fiber_length_m) {
  return PulseSchedule(fiber_length_m, {}, "free");
}

PulseSchedule build_cpmg(double fiber_length_m, long long pulse_count, double axis_phase_rad) {
  require_length(fiber_length_m);
  if (pulse_count < 2 || pulse_count % 2 != 0) {
    throw UsageError("CPMG pulse count must be even and >= 2 (got " +
                     std::to_string(pulse_count) + ")");
  }
  const auto n = static_cast<std::size_t>(pulse_count);
  std::vector<PulseEvent> events(n);
  for (std::size_t k = 0; k < n; ++k) {
    events[k] = {pulse_position(fiber_length_m, k, n), axis_phase_rad, kPi};
  }
  return PulseSchedule(fiber_length_m, std::move(events), "cpmg");
}

PulseSchedule build_kdd(double fiber_length_m, long long supercycle_count, double base_phase_rad) {
  require_length(fiber_length_m);
  if (supercycle_count < 1) {
    throw UsageError("KDD supercycle count must be >= 1 (got " +
                     std::to_string(supercycle_count) + ")");
  }
  static constexpr std::array<double, kKddPulsesPerBlock> kBlockAxes{
      kPi / 6.0, 0.0, kPi / 2.0, 0.0, kPi / 6.0};
  static constexpr std::array<double, 4> kBlockShifts{0.0, kPi / 2.0, kPi, 3.0 * kPi / 2.0};

  const std::size_t n = static_cast<std::size_t>(supercycle_count) * kKddPulsesPerSupercycle;
  std::vector<PulseEvent> events(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t block = k / kKddPulsesPerBlock;
    const double shift = base_phase_rad + kBlockShifts[block % kBlockShifts.size()];
    events[k] = {pulse_position(fiber_length_m, k, n), kBlockAxes[k % kKddPulsesPerBlock] + shift,
                 kPi};
  }
  return PulseSchedule(fiber_length_m, std::move(events), "kdd");
}

PulseSchedule apply_pulse_errors(const PulseSchedule& schedule, const PulseErrorModel& model,
                                 RandomStream& stream) {
  model.validate();
  if (model.sigma_fraction == 0.0) {
    return schedule;
  }
  std::vector<double> eps(schedule.size());
  for (auto& e : eps) {
    e = model.sigma_fraction * stream.standard_normal();
  }
  return apply_pulse_error_offsets(schedule, eps);
}

PulseSchedule apply_pulse_error_offsets(const PulseSchedule& schedule,
                                        std::span<const double> relative_errors) {
  if (relative_errors.size() != schedule.size()) {
    throw UsageError("one relative error per pulse required");
  }
  std::vector<double> angles(schedule.size());
  for (std::size_t k = 0; k < angles.size(); ++k) {
    angles[k] = kPi * (1.0 + relative_errors[k]);
  }
  return schedule.with_angles(angles);
}

void write_schedule(std::ostream& out, const PulseSchedule& schedule) {
  char buf[96];
  for (const auto& e : schedule.events()) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", e.position_m, e.axis_phase_rad,
                  e.angle_rad);
    out << buf;
  }
}

}  // namespace ddsim

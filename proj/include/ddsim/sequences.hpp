#pragma once

// Dynamical-decoupling schedules laid out along the fiber. Every pulse is an
// instantaneous rotation (a half-wave plate) about an equatorial axis.

#include <cstddef>
#include <iosfwd>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ddsim/rng.hpp"

namespace ddsim {

enum class SequenceKind { kFree, kCpmg, kKdd };

std::string_view to_string(SequenceKind kind);
// Accepts "free", "cpmg", "kdd". Throws UsageError otherwise.
SequenceKind parse_sequence_kind(std::string_view name);

inline constexpr double kDefaultCpmgAxisPhase = std::numbers::pi / 2.0;
inline constexpr std::size_t kKddPulsesPerSupercycle = 20;
inline constexpr std::size_t kKddPulsesPerBlock = 5;

struct PulseEvent {
  double position_m = 0.0;
  double axis_phase_rad = 0.0;
  double angle_rad = std::numbers::pi;

  friend bool operator==(const PulseEvent&, const PulseEvent&) = default;
};

class PulseSchedule {
public:
  // Throws UsageError unless 0 < position < L and positions strictly increase.
  PulseSchedule(double fiber_length_m, std::vector<PulseEvent> events, std::string name);

  double fiber_length_m() const noexcept { return fiber_length_m_; }
  std::span<const PulseEvent> events() const noexcept { return events_; }
  std::size_t size() const noexcept { return events_.size(); }
  const std::string& name() const noexcept { return name_; }

  // Same positions and axes, rotation angles replaced.
  PulseSchedule with_angles(std::span<const double> angles_rad) const;

  friend bool operator==(const PulseSchedule&, const PulseSchedule&) = default;

private:
  double fiber_length_m_;
  std::vector<PulseEvent> events_;
  std::string name_;
};

struct PulseErrorModel {
  // Standard deviation of the relative rotation-angle error (0.005 = 0.5%).
  double sigma_fraction = 0.0;

  void validate() const;
};

PulseSchedule build_free(double fiber_length_m);

/// `pulse_count` pi pulses at tau/2 + k tau, tau = L / pulse_count, all
/// about the same axis. pulse_count must be even and >= 2.
PulseSchedule build_cpmg(double fiber_length_m, long long pulse_count,
                         double axis_phase_rad = kDefaultCpmgAxisPhase);

/// Knill DD: each supercycle is four 5-pulse blocks with block phase
/// base + (0, pi/2, pi, 3pi/2); within a block the axes are
/// (pi/6 + P, P, pi/2 + P, P, pi/6 + P). Positions as for CPMG.
PulseSchedule build_kdd(double fiber_length_m, long long supercycle_count,
                        double base_phase_rad = 0.0);

/// Each angle becomes pi * (1 + eps_k), eps_k ~ N(0, sigma_fraction),
/// drawn independently per pulse. sigma 0 returns the schedule unchanged
/// without consuming the stream.
PulseSchedule apply_pulse_errors(const PulseSchedule& schedule, const PulseErrorModel& model,
                                 RandomStream& stream);

/// Deterministic variant with prescribed relative errors.
PulseSchedule apply_pulse_error_offsets(const PulseSchedule& schedule,
                                        std::span<const double> relative_errors);

/// "position_m,axis_phase_rad,angle_rad" per line.
void write_schedule(std::ostream& out, const PulseSchedule& schedule);

}  // namespace ddsim

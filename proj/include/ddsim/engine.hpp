#pragma once

// Monte Carlo ensembles over fiber noise realizations and plate errors.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ddsim/kernels.hpp"
#include "ddsim/noise.hpp"
#include "ddsim/polarization.hpp"
#include "ddsim/sequences.hpp"

namespace ddsim {

inline constexpr std::uint64_t kDefaultMasterSeed = 20140519;
inline constexpr std::size_t kDefaultTrials = 1000;
inline constexpr std::size_t kDefaultSegmentsPerInterval = 8;

struct NamedState {
  std::string label;
  PureState state;
};

// H, V and D.
std::vector<NamedState> default_input_states();

struct ScheduleSpec {
  SequenceKind kind = SequenceKind::kKdd;
  long long pulses = 800;  // total plates; KDD requires a multiple of 20
  double base_phase_rad = 0.0;
  double cpmg_axis_rad = kDefaultCpmgAxisPhase;

  void validate() const;
};

PulseSchedule build_schedule(double fiber_length_m, const ScheduleSpec& spec);

// Replaces the birefringence model with a caller-provided profile per trial.
using ProfileSource = std::function<NoiseProfile(const SegmentGrid& grid, std::uint64_t trial)>;

struct SimConfig {
  double fiber_length_m = 500.0;
  std::size_t segments_per_interval = kDefaultSegmentsPerInterval;
  BirefringenceModel birefringence;
  ScheduleSpec schedule;
  PulseErrorModel error_model;
  std::size_t trials = kDefaultTrials;
  std::uint64_t master_seed = kDefaultMasterSeed;
  std::vector<NamedState> input_states = default_input_states();
  bool record_trajectory = false;

  // Execution only; results do not depend on these.
  std::size_t threads = 0;  // 0: hardware concurrency
  kernels::KernelKind kernel = kernels::KernelKind::kAuto;

  ProfileSource profile_source;

  // Throws UsageError naming the offending field.
  void validate() const;
  SegmentGrid grid() const;
};

// Everything random about one trial.
struct TrialRealization {
  SegmentGrid grid;
  NoiseProfile profile;
  PulseSchedule schedule;
};

TrialRealization realize_trial(const SimConfig& config, std::uint64_t trial_index);

struct TrialOutput {
  std::vector<DensityMatrix> states;              // one per input state
  std::vector<std::vector<double>> trajectories;  // per state; empty unless recorded
};

/// Deterministic in (master_seed, trial_index).
TrialOutput run_trial(const SimConfig& config, std::uint64_t trial_index);

struct StateResult {
  std::string label;
  PureState state = PureState::horizontal();
  double fidelity_mean = 0.0;
  double fidelity_stderr = 0.0;
  DensityMatrix averaged = DensityMatrix::maximally_mixed();
  std::vector<double> trajectory_fidelity;  // mean over trials per sample
};

struct SimResult {
  SimConfig config;
  std::vector<StateResult> states;
  std::vector<double> trajectory_positions_m;  // after each plate, then L
  kernels::KernelKind kernel_used = kernels::KernelKind::kScalar;
};

SimResult run_ensemble(const SimConfig& config);

/// One result per config. Throws UsageError on an empty list.
std::vector<SimResult> sweep(std::span<const SimConfig> configs);

}  // namespace ddsim

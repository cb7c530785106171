#include "ddsim/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>
#include <utility>

#include "ddsim/errors.hpp"

namespace ddsim {

namespace {

using kernels::kColumnComponents;
using kernels::kLanes;

// Trials are reduced in fixed chunks, then chunks in index order, so the
// floating-point summation order never depends on the worker count.
constexpr std::size_t kBatchesPerChunk = 16;

// Everything shared by all trials of one configuration.
struct Plan {
  SegmentGrid grid;
  PulseSchedule nominal;
  std::vector<std::size_t> interval_edges;  // segment indices, size N + 2
  std::vector<double> axis_cos;
  std::vector<double> axis_sin;
  std::vector<double> positions;  // trajectory sample positions
};

Plan make_plan(const SimConfig& config) {
  Plan plan{config.grid(), build_schedule(config.fiber_length_m, config.schedule), {}, {}, {}, {}};
  const auto events = plan.nominal.events();
  plan.interval_edges.reserve(events.size() + 2);
  plan.interval_edges.push_back(0);
  for (const auto& e : events) {
    plan.interval_edges.push_back(plan.grid.boundary_index(e.position_m));
    plan.axis_cos.push_back(std::cos(e.axis_phase_rad));
    plan.axis_sin.push_back(std::sin(e.axis_phase_rad));
    plan.positions.push_back(e.position_m);
  }
  plan.interval_edges.push_back(plan.grid.segment_count());
  plan.positions.push_back(config.fiber_length_m);
  return plan;
}

// Per-batch scratch in kernel layout.
struct BatchInput {
  std::vector<double> dephase;
  std::vector<double> rotation;
  std::vector<double> trajectory;

  BatchInput(std::size_t pulses, bool record)
      : dephase((pulses + 1) * kLanes, 0.0),
        rotation(pulses * kLanes, std::numbers::pi),
        trajectory(record ? kernels::trajectory_size(pulses) : 0, 0.0) {}
};

NoiseProfile draw_profile(const SimConfig& config, const SegmentGrid& grid, std::uint64_t trial) {
  if (config.profile_source) {
    NoiseProfile p = config.profile_source(grid, trial);
    if (p.size() != grid.segment_count()) {
      throw UsageError("profile source returned the wrong number of segments");
    }
    return p;
  }
  auto stream = RandomStream::for_trial(config.master_seed, trial, Substream::kNoise);
  return generate_profile(grid, config.birefringence, stream);
}

void fill_lane(const SimConfig& config, const Plan& plan, std::uint64_t trial, std::size_t lane,
               BatchInput& in) {
  const NoiseProfile profile = draw_profile(config, plan.grid, trial);
  const auto increments = profile.phase_increments();
  const std::size_t intervals = plan.interval_edges.size() - 1;
  for (std::size_t k = 0; k < intervals; ++k) {
    // Diagonal rotations commute: one rotation by the interval's summed phase.
    double phase = 0.0;
    for (std::size_t j = plan.interval_edges[k]; j < plan.interval_edges[k + 1]; ++j) {
      phase += increments[j];
    }
    in.dephase[k * kLanes + lane] = phase;
  }

  auto stream = RandomStream::for_trial(config.master_seed, trial, Substream::kPulseErrors);
  const PulseSchedule actual = apply_pulse_errors(plan.nominal, config.error_model, stream);
  const auto events = actual.events();
  for (std::size_t k = 0; k < events.size(); ++k) {
    in.rotation[k * kLanes + lane] = events[k].angle_rad;
  }
}

// Output ket U psi for U = [[a, -conj(b)], [b, conj(a)]].
Ket apply_column(Complex a, Complex b, const PureState& psi) {
  return Ket(a * psi.alpha() - std::conj(b) * psi.beta(), b * psi.alpha() + std::conj(a) * psi.beta());
}

double ket_fidelity(const Ket& out, const PureState& psi) {
  const Complex overlap = std::conj(psi.alpha()) * out(0) + std::conj(psi.beta()) * out(1);
  return std::min(1.0, std::norm(overlap));
}

// Column of `lane` from one trajectory record.
std::pair<Complex, Complex> record_column(const double* record, std::size_t lane) {
  return {Complex(record[0 * kLanes + lane], record[1 * kLanes + lane]),
          Complex(record[2 * kLanes + lane], record[3 * kLanes + lane])};
}

struct StateAccumulator {
  Matrix2 rho_sum = Matrix2::Zero();
  std::size_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;
  std::vector<double> trajectory_sum;

  void add(double f) {
    ++count;
    const double delta = f - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (f - mean);
  }

  // Chan et al. pairwise update.
  void merge(const StateAccumulator& other) {
    if (other.count == 0) return;
    rho_sum += other.rho_sum;
    if (count == 0) {
      count = other.count;
      mean = other.mean;
      m2 = other.m2;
    } else {
      const double na = static_cast<double>(count);
      const double nb = static_cast<double>(other.count);
      const double delta = other.mean - mean;
      const double n = na + nb;
      mean += delta * nb / n;
      m2 += other.m2 + delta * delta * na * nb / n;
      count += other.count;
    }
    if (trajectory_sum.empty()) {
      trajectory_sum = other.trajectory_sum;
    } else {
      for (std::size_t i = 0; i < trajectory_sum.size(); ++i) {
        trajectory_sum[i] += other.trajectory_sum[i];
      }
    }
  }
};

struct Runner {
  const SimConfig& config;
  Plan plan;
  kernels::ChainFn chain;

  explicit Runner(const SimConfig& cfg)
      : config(cfg), plan(make_plan(cfg)), chain(kernels::select_chain(cfg.kernel)) {}

  std::size_t pulses() const { return plan.nominal.size(); }

  // Runs trials [first, first + count), count <= kLanes. Padding lanes see
  // no noise and perfect plates and are ignored.
  void run_batch(std::uint64_t first, std::size_t count, BatchInput& in,
                 kernels::Su2Columns& out) const {
    std::fill(in.dephase.begin(), in.dephase.end(), 0.0);
    std::fill(in.rotation.begin(), in.rotation.end(), std::numbers::pi);
    for (std::size_t lane = 0; lane < count; ++lane) {
      fill_lane(config, plan, first + lane, lane, in);
    }
    kernels::ChainBatch batch{pulses(), in.dephase, in.rotation, plan.axis_cos, plan.axis_sin};
    chain(batch, out, in.trajectory);
  }

  void accumulate_batch(std::size_t count, const BatchInput& in, const kernels::Su2Columns& out,
                        std::vector<StateAccumulator>& acc) const {
    const std::size_t samples = plan.positions.size();
    constexpr std::size_t kRecord = kColumnComponents * kLanes;
    for (std::size_t lane = 0; lane < count; ++lane) {
      const Complex a(out.a_re[lane], out.a_im[lane]);
      const Complex b(out.b_re[lane], out.b_im[lane]);
      for (std::size_t s = 0; s < config.input_states.size(); ++s) {
        const PureState& psi = config.input_states[s].state;
        const Ket ket = apply_column(a, b, psi);
        acc[s].rho_sum += ket * ket.adjoint();
        acc[s].add(ket_fidelity(ket, psi));
        if (config.record_trajectory) {
          auto& traj = acc[s].trajectory_sum;
          traj.resize(samples, 0.0);
          for (std::size_t r = 0; r < samples; ++r) {
            const auto [ra, rb] = record_column(in.trajectory.data() + r * kRecord, lane);
            traj[r] += ket_fidelity(apply_column(ra, rb, psi), psi);
          }
        }
      }
    }
  }
};

std::size_t worker_count(std::size_t requested, std::size_t chunks) {
  std::size_t n = requested;
  if (n == 0) {
    n = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  }
  return std::max<std::size_t>(1, std::min(n, chunks));
}

}  // namespace

std::vector<NamedState> default_input_states() {
  return {{"H", PureState::horizontal()}, {"V", PureState::vertical()}, {"D", PureState::diagonal()}};
}

void ScheduleSpec::validate() const {
  switch (kind) {
    case SequenceKind::kFree:
      if (pulses != 0) throw UsageError("pulses: free evolution takes no pulses");
      break;
    case SequenceKind::kCpmg:
      if (pulses < 2 || pulses % 2 != 0) {
        throw UsageError("pulses: CPMG needs an even count >= 2 (got " + std::to_string(pulses) + ")");
      }
      break;
    case SequenceKind::kKdd:
      if (pulses < 20 || pulses % 20 != 0) {
        throw UsageError("pulses: KDD needs a positive multiple of 20 (got " +
                         std::to_string(pulses) + ")");
      }
      break;
  }
  if (!std::isfinite(base_phase_rad)) throw UsageError("base_phase_rad must be finite");
  if (!std::isfinite(cpmg_axis_rad)) throw UsageError("cpmg_axis_rad must be finite");
}

PulseSchedule build_schedule(double fiber_length_m, const ScheduleSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case SequenceKind::kFree: return build_free(fiber_length_m);
    case SequenceKind::kCpmg: return build_cpmg(fiber_length_m, spec.pulses, spec.cpmg_axis_rad);
    case SequenceKind::kKdd:
      return build_kdd(fiber_length_m, spec.pulses / static_cast<long long>(kKddPulsesPerSupercycle),
                       spec.base_phase_rad);
  }
  throw InternalError("unhandled sequence kind");
}

void SimConfig::validate() const {
  if (!(fiber_length_m > 0.0) || !std::isfinite(fiber_length_m)) {
    throw UsageError("length_m must be positive");
  }
  if (segments_per_interval < 1) throw UsageError("segments_per_interval must be >= 1");
  if (schedule.pulses > 0 && segments_per_interval % 2 != 0) {
    throw UsageError("segments_per_interval must be even when plates are present");
  }
  if (trials < 1) throw UsageError("trials must be >= 1");
  if (input_states.empty()) throw UsageError("states: at least one input state required");
  birefringence.validate();
  error_model.validate();
  schedule.validate();
}

SegmentGrid SimConfig::grid() const {
  return SegmentGrid::for_pulse_spacing(fiber_length_m, static_cast<std::size_t>(schedule.pulses),
                                        segments_per_interval);
}

TrialRealization realize_trial(const SimConfig& config, std::uint64_t trial_index) {
  config.validate();
  SegmentGrid grid = config.grid();
  NoiseProfile profile = draw_profile(config, grid, trial_index);
  auto stream = RandomStream::for_trial(config.master_seed, trial_index, Substream::kPulseErrors);
  PulseSchedule schedule = apply_pulse_errors(build_schedule(config.fiber_length_m, config.schedule),
                                              config.error_model, stream);
  return {grid, std::move(profile), std::move(schedule)};
}

TrialOutput run_trial(const SimConfig& config, std::uint64_t trial_index) {
  config.validate();
  const Runner runner(config);
  BatchInput in(runner.pulses(), config.record_trajectory);
  kernels::Su2Columns out;
  runner.run_batch(trial_index, 1, in, out);

  TrialOutput result;
  const Complex a(out.a_re[0], out.a_im[0]);
  const Complex b(out.b_re[0], out.b_im[0]);
  const std::size_t samples = runner.plan.positions.size();
  constexpr std::size_t kRecord = kColumnComponents * kLanes;
  for (const auto& named : config.input_states) {
    const Ket ket = apply_column(a, b, named.state);
    result.states.push_back(DensityMatrix::trusted(ket * ket.adjoint()));
    std::vector<double> traj;
    if (config.record_trajectory) {
      traj.reserve(samples);
      for (std::size_t r = 0; r < samples; ++r) {
        const auto [ra, rb] = record_column(in.trajectory.data() + r * kRecord, 0);
        traj.push_back(ket_fidelity(apply_column(ra, rb, named.state), named.state));
      }
    }
    result.trajectories.push_back(std::move(traj));
  }
  return result;
}

SimResult run_ensemble(const SimConfig& config) {
  config.validate();
  const Runner runner(config);
  const std::size_t states = config.input_states.size();
  const std::size_t batches = (config.trials + kLanes - 1) / kLanes;
  const std::size_t chunks = (batches + kBatchesPerChunk - 1) / kBatchesPerChunk;

  std::vector<std::vector<StateAccumulator>> chunk_acc(chunks,
                                                       std::vector<StateAccumulator>(states));
  std::atomic<std::size_t> next_chunk{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto work = [&] {
    BatchInput in(runner.pulses(), config.record_trajectory);
    kernels::Su2Columns out;
    for (;;) {
      const std::size_t c = next_chunk.fetch_add(1);
      if (c >= chunks) return;
      try {
        const std::size_t first_batch = c * kBatchesPerChunk;
        const std::size_t last_batch = std::min(batches, first_batch + kBatchesPerChunk);
        for (std::size_t bi = first_batch; bi < last_batch; ++bi) {
          const std::uint64_t first = bi * kLanes;
          const std::size_t count = std::min<std::size_t>(kLanes, config.trials - first);
          runner.run_batch(first, count, in, out);
          runner.accumulate_batch(count, in, out, chunk_acc[c]);
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next_chunk.store(chunks);
        return;
      }
    }
  };

  const std::size_t workers = worker_count(config.threads, chunks);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<StateAccumulator> total(states);
  for (const auto& acc : chunk_acc) {
    for (std::size_t s = 0; s < states; ++s) total[s].merge(acc[s]);
  }

  SimResult result;
  result.config = config;
  result.kernel_used = kernels::resolve(config.kernel);
  if (config.record_trajectory) result.trajectory_positions_m = runner.plan.positions;
  const double n = static_cast<double>(config.trials);
  for (std::size_t s = 0; s < states; ++s) {
    const auto& acc = total[s];
    StateResult sr;
    sr.label = config.input_states[s].label;
    sr.state = config.input_states[s].state;
    sr.averaged = DensityMatrix::trusted(acc.rho_sum / n);
    sr.fidelity_mean = fidelity(sr.state, sr.averaged);
    sr.fidelity_stderr =
        acc.count >= 2 ? std::sqrt(std::max(0.0, acc.m2) / (n - 1.0)) / std::sqrt(n) : 0.0;
    for (double v : acc.trajectory_sum) sr.trajectory_fidelity.push_back(v / n);
    result.states.push_back(std::move(sr));
  }
  return result;
}

std::vector<SimResult> sweep(std::span<const SimConfig> configs) {
  if (configs.empty()) throw UsageError("sweep: empty configuration list");
  for (const auto& c : configs) c.validate();
  std::vector<SimResult> results;
  results.reserve(configs.size());
  for (const auto& c : configs) results.push_back(run_ensemble(c));
  return results;
}

}  // namespace ddsim

#pragma once

#include "rapkit/model.hpp"

namespace rapkit {

// ---- Multi-channel power allocation -----------------------------------

struct ChannelProblem {
  std::vector<double> bandwidth;  // B_i > 0
  std::vector<double> gain;       // c_i > 0
  std::vector<double> power_cap;  // empty means uncapped
  double total_power = 0.0;
};

// Capacity maximization as a box instance with a = B, b = 1/(B c),
// f = -log; the allocation maps back to channel powers unchanged.
Instance channel_power_to_rap(const ChannelProblem& p);

struct MsePowerProblem {
  std::vector<double> w, A, D;  // all positive
  double total_power = 0.0;
};

// Mean-square-error objective sum w_i / (A_i x_i + D_i) with
// a = sqrt(w/A), b = D / sqrt(w A), f = 1/y.
Instance mse_power_to_rap(const MsePowerProblem& p);

// ---- Storage operation --------------------------------------------------

enum class StorageObjective { Flatten, Autarky, Peak };

struct StorageSpec {
  int n = 0;
  double dt = 1.0;
  double capacity = 0.0;       // D
  double s_start = 0.0, s_end = 0.0;
  double x_min = 0.0, x_max = 0.0;
  std::vector<double> baseline;  // p_i
  StorageObjective objective = StorageObjective::Flatten;
  double peak_level = 0.0;       // M, Peak only
};

// Nested instance over the n-1 energy-level prefixes; a = ones, b = p;
// flatten / autarky / peak select quadratic, |y|, threshold(M).
Instance storage_to_rap(const StorageSpec& spec);

struct StoragePlan {
  std::vector<double> power;  // x
  std::vector<double> level;  // stored energy after each interval
  std::vector<double> load;   // x + p
  bool within_capacity = true;
  bool within_rates = true;
  bool reaches_target = true;
};

StoragePlan storage_recover(const StorageSpec& spec, const std::vector<double>& x,
                            double tol = kFeasTol);

// ---- Stratified sampling -------------------------------------------------

struct StratifiedSpec {
  std::vector<double> stratum_size;  // N_i >= 1
  std::vector<double> variance;      // S_i^2 >= 0
  long long total_samples = 0;       // R
  std::vector<long long> lo, hi;     // 1 <= lo <= hi <= N_i
};

// Integer box instance with a_i = N_i S_i (so the continuous optimum follows
// the classical N S allocation), b = 0, f = 1/y. Zero-variance strata are
// pinned at their lower bound and dropped from the solve.
struct StratifiedRap {
  Instance inst;
  std::vector<int> kept;           // original indices of solved strata
  std::vector<long long> pinned;   // full-length; -1 where solved
};

StratifiedRap stratified_to_rap(const StratifiedSpec& spec);

// Full-length allocation with pinned strata reinserted.
std::vector<double> stratified_recover(const StratifiedRap& rap, const std::vector<double>& x);

// ---- Vessel speed --------------------------------------------------------

struct RouteSpec {
  std::vector<double> leg_distance;              // d_i > 0, n legs
  std::vector<double> window_open, window_close; // per intermediate port, n-1 each
  double t_start = 0.0, t_end = 0.0;
  double v_min = 0.0, v_max = 0.0;
};

// Leg travel times as a nested instance: prefix i bounded by the port-i
// window shifted to elapsed time, total t_end - t_start, box
// [d/v_max, d/v_min], a = d, b = 0. Solved as the quadratic instance; the
// sailing cost never enters the solve, only the certificate.
struct VesselRap {
  Instance inst;
  NestedChain chain;
};

VesselRap vessel_to_rap(const RouteSpec& route);

struct VesselPlan {
  std::vector<double> leg_time;
  std::vector<double> speed;
  std::vector<double> arrival;     // ports 1..n
  bool windows_met = true;
  bool speeds_within_limits = true;
  std::vector<int> violated_ports;
};

VesselPlan vessel_recover(const RouteSpec& route, const std::vector<double>& x,
                          double tol = kFeasTol);

// ---- Single-processor speed scaling ---------------------------------------

struct TaskSpec {
  std::vector<double> work;      // w_i > 0
  std::vector<double> arrival;   // A_i
  std::vector<double> deadline;  // D_i > A_i, ordered with arrivals
  double s_max = 0.0;
};

struct SpeedScaleRap {
  Instance inst;
  NestedChain chain;
};

// Execution times as a nested instance: prefix i in [A_{i+1}, D_i], total
// D_n, box [w/s_max, D - A]; a = w, b = 0. Assumes the no-idle schedule; the
// recovered plan flags inputs that break that premise.
SpeedScaleRap speedscale_to_rap(const TaskSpec& tasks);

struct SchedulePlan {
  std::vector<double> exec_time;
  std::vector<double> speed;
  std::vector<double> start, finish;
  bool deadlines_met = true;
  bool arrivals_respected = true;  // false when the no-idle premise is broken
  bool speeds_within_limits = true;
};

SchedulePlan speedscale_recover(const TaskSpec& tasks, const std::vector<double>& x,
                                double tol = kFeasTol);

// Cost handles for certifying the quadratic solutions under real cost models:
// sailing cost c(v) = v^k per unit distance gives q(y) = y^-k; processor
// power p(s) = s^k gives q(y) = y^(1-k).
ConvexFunction sailing_cost_rate(double exponent);
ConvexFunction processor_energy_rate(double exponent);

}  // namespace rapkit

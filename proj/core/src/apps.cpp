#include "rapkit/apps.hpp"

#include <algorithm>
#include <cmath>

#include "rapkit/catalog.hpp"
#include "util.hpp"

namespace rapkit {

Instance channel_power_to_rap(const ChannelProblem& p) {
  const int n = static_cast<int>(p.bandwidth.size());
  if (static_cast<int>(p.gain.size()) != n)
    fail(ErrorCode::DimensionMismatch, "bandwidth and gain lengths differ");
  ObjectiveSpec obj;
  obj.a.resize(n);
  obj.b.resize(n);
  for (int i = 0; i < n; ++i) {
    if (!(p.bandwidth[i] > 0.0) || !(p.gain[i] > 0.0))
      fail(ErrorCode::DomainViolation, "bandwidth and gain must be positive");
    obj.a[i] = p.bandwidth[i];
    obj.b[i] = 1.0 / (p.bandwidth[i] * p.gain[i]);
  }
  obj.f = catalog::neg_log();

  ConstraintSpec cons;
  cons.n = n;
  cons.R = p.total_power;
  cons.kind = ConstraintKind::Box;
  cons.lower.assign(n, 0.0);
  cons.upper = p.power_cap.empty() ? std::vector<double>(n, kInf) : p.power_cap;
  return validate_instance(std::move(obj), std::move(cons), VariableDomain::Continuous);
}

Instance mse_power_to_rap(const MsePowerProblem& p) {
  const int n = static_cast<int>(p.w.size());
  if (static_cast<int>(p.A.size()) != n || static_cast<int>(p.D.size()) != n)
    fail(ErrorCode::DimensionMismatch, "w, A, D lengths differ");
  ObjectiveSpec obj;
  obj.a.resize(n);
  obj.b.resize(n);
  for (int i = 0; i < n; ++i) {
    if (!(p.w[i] > 0.0) || !(p.A[i] > 0.0) || !(p.D[i] > 0.0))
      fail(ErrorCode::DomainViolation, "w, A, D must be positive");
    obj.a[i] = std::sqrt(p.w[i] / p.A[i]);
    obj.b[i] = p.D[i] / std::sqrt(p.w[i] * p.A[i]);
  }
  obj.f = catalog::reciprocal();

  // The parameterization must reproduce w / (A x + D) pointwise.
  for (int i = 0; i < n; ++i)
    for (double x : {0.0, 1.0, 3.5}) {
      double lhs = obj.a[i] / (x / obj.a[i] + obj.b[i]);
      double rhs = p.w[i] / (p.A[i] * x + p.D[i]);
      if (std::abs(lhs - rhs) > 1e-9 * std::max(1.0, std::abs(rhs)))
        fail(ErrorCode::DomainViolation, "mse parameterization mismatch");
    }

  ConstraintSpec cons;
  cons.n = n;
  cons.R = p.total_power;
  cons.kind = ConstraintKind::Box;
  cons.lower.assign(n, 0.0);
  cons.upper.assign(n, kInf);
  return validate_instance(std::move(obj), std::move(cons), VariableDomain::Continuous);
}

Instance storage_to_rap(const StorageSpec& spec) {
  const int n = spec.n;
  if (n <= 0 || static_cast<int>(spec.baseline.size()) != n)
    fail(ErrorCode::DimensionMismatch, "baseline length must equal n");
  if (!(spec.dt > 0.0)) fail(ErrorCode::DomainViolation, "dt must be positive");
  if (spec.s_start < 0.0 || spec.s_start > spec.capacity || spec.s_end < 0.0 ||
      spec.s_end > spec.capacity)
    fail(ErrorCode::DomainViolation, "start and target levels must fit the capacity");
  if (spec.x_min > spec.x_max) fail(ErrorCode::DomainViolation, "x_min exceeds x_max");

  ObjectiveSpec obj;
  obj.a.assign(n, 1.0);
  obj.b = spec.baseline;
  switch (spec.objective) {
    case StorageObjective::Flatten: break;  // quadratic marker
    case StorageObjective::Autarky: obj.f = catalog::absolute(); break;
    case StorageObjective::Peak: obj.f = catalog::threshold(spec.peak_level); break;
  }

  ConstraintSpec cons;
  cons.n = n;
  cons.R = (spec.s_end - spec.s_start) / spec.dt;
  cons.kind = ConstraintKind::Nested;
  cons.lower.assign(n, spec.x_min);
  cons.upper.assign(n, spec.x_max);
  for (int j = 1; j < n; ++j) {
    std::vector<int> prefix(j);
    for (int i = 0; i < j; ++i) prefix[i] = i;
    cons.sets.push_back(std::move(prefix));
    cons.set_lower.push_back(-spec.s_start / spec.dt);
    cons.set_upper.push_back((spec.capacity - spec.s_start) / spec.dt);
  }
  return validate_instance(std::move(obj), std::move(cons), VariableDomain::Continuous);
}

StoragePlan storage_recover(const StorageSpec& spec, const std::vector<double>& x, double tol) {
  StoragePlan plan;
  plan.power = x;
  double level = spec.s_start;
  for (int i = 0; i < spec.n; ++i) {
    level += spec.dt * x[i];
    plan.level.push_back(level);
    plan.load.push_back(x[i] + spec.baseline[i]);
    if (level < -tol || level > spec.capacity + tol) plan.within_capacity = false;
    if (x[i] < spec.x_min - tol || x[i] > spec.x_max + tol) plan.within_rates = false;
  }
  plan.reaches_target = std::abs(level - spec.s_end) <= std::max(tol, 1e-6);
  return plan;
}

StratifiedRap stratified_to_rap(const StratifiedSpec& spec) {
  const int n = static_cast<int>(spec.stratum_size.size());
  if (static_cast<int>(spec.variance.size()) != n || static_cast<int>(spec.lo.size()) != n ||
      static_cast<int>(spec.hi.size()) != n)
    fail(ErrorCode::DimensionMismatch, "stratified spec lengths differ");

  StratifiedRap rap;
  rap.pinned.assign(n, -1);
  long long pinned_total = 0;

  ObjectiveSpec obj;
  ConstraintSpec cons;
  for (int i = 0; i < n; ++i) {
    if (spec.stratum_size[i] < 1.0) fail(ErrorCode::DomainViolation, "stratum sizes must be >= 1");
    if (spec.variance[i] < 0.0) fail(ErrorCode::DomainViolation, "variances must be >= 0");
    if (spec.lo[i] > spec.hi[i] || spec.hi[i] > static_cast<long long>(spec.stratum_size[i]))
      fail(ErrorCode::DomainViolation, "sample bounds must satisfy lo <= hi <= N");
    if (spec.variance[i] == 0.0) {
      rap.pinned[i] = spec.lo[i];
      pinned_total += spec.lo[i];
      continue;
    }
    if (spec.lo[i] < 1)
      fail(ErrorCode::DomainViolation, "strata with positive variance need at least one sample");
    rap.kept.push_back(i);
    obj.a.push_back(spec.stratum_size[i] * std::sqrt(spec.variance[i]));
    obj.b.push_back(0.0);
    cons.lower.push_back(static_cast<double>(spec.lo[i]));
    cons.upper.push_back(static_cast<double>(spec.hi[i]));
  }
  obj.f = catalog::reciprocal();
  cons.n = static_cast<int>(rap.kept.size());
  cons.R = static_cast<double>(spec.total_samples - pinned_total);
  cons.kind = ConstraintKind::Box;
  if (cons.n == 0) fail(ErrorCode::DomainViolation, "no stratum left to optimize");
  rap.inst = validate_instance(std::move(obj), std::move(cons), VariableDomain::Integer);
  return rap;
}

std::vector<double> stratified_recover(const StratifiedRap& rap, const std::vector<double>& x) {
  std::vector<double> full(rap.pinned.size(), 0.0);
  for (size_t i = 0; i < rap.pinned.size(); ++i)
    if (rap.pinned[i] >= 0) full[i] = static_cast<double>(rap.pinned[i]);
  for (size_t p = 0; p < rap.kept.size(); ++p) full[rap.kept[p]] = x[p];
  return full;
}

VesselRap vessel_to_rap(const RouteSpec& route) {
  const int n = static_cast<int>(route.leg_distance.size());
  if (n < 1) fail(ErrorCode::DimensionMismatch, "route needs at least one leg");
  if (static_cast<int>(route.window_open.size()) != n - 1 ||
      static_cast<int>(route.window_close.size()) != n - 1)
    fail(ErrorCode::DimensionMismatch, "intermediate ports need n-1 windows");
  if (!(route.v_min > 0.0) || route.v_min > route.v_max)
    fail(ErrorCode::DomainViolation, "speed limits must satisfy 0 < v_min <= v_max");
  for (double d : route.leg_distance)
    if (!(d > 0.0)) fail(ErrorCode::DomainViolation, "leg distances must be positive");

  double horizon = route.t_end - route.t_start;
  double min_time = 0.0, max_time = 0.0;
  for (double d : route.leg_distance) {
    min_time += d / route.v_max;
    max_time += d / route.v_min;
  }
  if (horizon < min_time - kFeasTol || horizon > max_time + kFeasTol)
    fail(ErrorCode::Infeasible, "horizon unreachable at the allowed speeds");

  VesselRap rap;
  ObjectiveSpec obj;
  obj.a = route.leg_distance;
  obj.b.assign(n, 0.0);

  ConstraintSpec cons;
  cons.n = n;
  cons.R = horizon;
  cons.kind = ConstraintKind::Nested;
  cons.lower.resize(n);
  cons.upper.resize(n);
  for (int i = 0; i < n; ++i) {
    cons.lower[i] = route.leg_distance[i] / route.v_max;
    cons.upper[i] = route.leg_distance[i] / route.v_min;
  }
  for (int i = 1; i < n; ++i) {
    std::vector<int> prefix(i);
    for (int k = 0; k < i; ++k) prefix[k] = k;
    cons.sets.push_back(std::move(prefix));
    double lo = route.window_open[i - 1];
    double hi = route.window_close[i - 1];
    cons.set_lower.push_back(lo == -kInf ? -kInf : lo - route.t_start);
    cons.set_upper.push_back(hi == kInf ? kInf : hi - route.t_start);
  }
  rap.inst = validate_instance(std::move(obj), std::move(cons), VariableDomain::Continuous);
  rap.chain = to_nested_chain(rap.inst.cons);
  return rap;
}

VesselPlan vessel_recover(const RouteSpec& route, const std::vector<double>& x, double tol) {
  const int n = static_cast<int>(route.leg_distance.size());
  VesselPlan plan;
  plan.leg_time = x;
  double t = route.t_start;
  for (int i = 0; i < n; ++i) {
    double v = route.leg_distance[i] / x[i];
    plan.speed.push_back(v);
    t += x[i];
    plan.arrival.push_back(t);
    if (v < route.v_min - tol * route.v_min || v > route.v_max + tol * route.v_max)
      plan.speeds_within_limits = false;
    if (i + 1 < n) {
      if (t < route.window_open[i] - tol || t > route.window_close[i] + tol) {
        plan.windows_met = false;
        plan.violated_ports.push_back(i + 1);
      }
    }
  }
  if (std::abs(t - route.t_end) > std::max(tol, 1e-6)) plan.windows_met = false;
  return plan;
}

SpeedScaleRap speedscale_to_rap(const TaskSpec& tasks) {
  const int n = static_cast<int>(tasks.work.size());
  if (static_cast<int>(tasks.arrival.size()) != n ||
      static_cast<int>(tasks.deadline.size()) != n)
    fail(ErrorCode::DimensionMismatch, "task spec lengths differ");
  if (!(tasks.s_max > 0.0)) fail(ErrorCode::DomainViolation, "s_max must be positive");
  for (int i = 0; i < n; ++i) {
    if (!(tasks.work[i] > 0.0)) fail(ErrorCode::DomainViolation, "work must be positive");
    if (!(tasks.deadline[i] > tasks.arrival[i]))
      fail(ErrorCode::DomainViolation, "deadlines must exceed arrivals");
    if (i > 0 && (tasks.arrival[i] < tasks.arrival[i - 1] ||
                  tasks.deadline[i] < tasks.deadline[i - 1]))
      fail(ErrorCode::DomainViolation, "tasks must be ordered with agreeable deadlines");
    if (tasks.work[i] / tasks.s_max > tasks.deadline[i] - tasks.arrival[i] + kFeasTol)
      fail(ErrorCode::Infeasible, "task " + std::to_string(i + 1) + " cannot finish in time");
  }

  SpeedScaleRap rap;
  ObjectiveSpec obj;
  obj.a = tasks.work;
  obj.b.assign(n, 0.0);

  ConstraintSpec cons;
  cons.n = n;
  cons.R = tasks.deadline[n - 1];
  cons.kind = ConstraintKind::Nested;
  cons.lower.resize(n);
  cons.upper.resize(n);
  for (int i = 0; i < n; ++i) {
    cons.lower[i] = tasks.work[i] / tasks.s_max;
    cons.upper[i] = tasks.deadline[i] - tasks.arrival[i];
  }
  for (int i = 1; i < n; ++i) {
    std::vector<int> prefix(i);
    for (int k = 0; k < i; ++k) prefix[k] = k;
    cons.sets.push_back(std::move(prefix));
    cons.set_lower.push_back(tasks.arrival[i]);
    cons.set_upper.push_back(tasks.deadline[i - 1]);
  }
  rap.inst = validate_instance(std::move(obj), std::move(cons), VariableDomain::Continuous);
  rap.chain = to_nested_chain(rap.inst.cons);
  return rap;
}

SchedulePlan speedscale_recover(const TaskSpec& tasks, const std::vector<double>& x,
                                double tol) {
  const int n = static_cast<int>(tasks.work.size());
  SchedulePlan plan;
  plan.exec_time = x;
  double t = 0.0;
  for (int i = 0; i < n; ++i) {
    plan.start.push_back(t);
    double s = tasks.work[i] / x[i];
    plan.speed.push_back(s);
    if (s > tasks.s_max * (1.0 + 1e-9) + tol) plan.speeds_within_limits = false;
    if (t < tasks.arrival[i] - tol) plan.arrivals_respected = false;
    t += x[i];
    plan.finish.push_back(t);
    if (t > tasks.deadline[i] + tol) plan.deadlines_met = false;
  }
  return plan;
}

ConvexFunction sailing_cost_rate(double exponent) {
  ConvexFunction f = catalog::neg_power(exponent);
  f.name = "sailing-cost";
  return f;
}

ConvexFunction processor_energy_rate(double exponent) {
  ConvexFunction f = catalog::neg_power(exponent - 1.0);
  f.name = "processor-energy";
  return f;
}

}  // namespace rapkit

#include "rapkit/instance_io.hpp"

#include <cmath>

#include "json.hpp"
#include "rapkit/catalog.hpp"

namespace rapkit {

using nlohmann::json;

namespace {

json bound_to_json(double v) {
  if (v == kInf || v == -kInf) return nullptr;
  return v;
}

double bound_from_json(const json& j, double absent) {
  if (j.is_null()) return absent;
  if (!j.is_number()) fail(ErrorCode::ParseError, "bound entries must be numbers or null");
  return j.get<double>();
}

std::vector<double> bounds_array(const json& j, int n, double absent) {
  std::vector<double> out;
  if (j.is_null()) return out;
  if (!j.is_array()) fail(ErrorCode::ParseError, "expected an array of bounds");
  out.reserve(j.size());
  for (const auto& e : j) out.push_back(bound_from_json(e, absent));
  if (n >= 0 && static_cast<int>(out.size()) != n)
    fail(ErrorCode::ParseError, "bound array length mismatch");
  return out;
}

std::vector<double> number_array(const json& j, const char* what) {
  if (!j.is_array()) fail(ErrorCode::ParseError, std::string(what) + " must be an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& e : j) {
    if (!e.is_number()) fail(ErrorCode::ParseError, std::string(what) + " entries must be numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

json parse_text(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) fail(ErrorCode::ParseError, "invalid JSON");
  return j;
}

}  // namespace

Instance parse_instance(const std::string& json_text) {
  json j = parse_text(json_text);
  if (!j.is_object() || !j.contains("objective") || !j.contains("constraints"))
    fail(ErrorCode::ParseError, "instance needs objective and constraints objects");

  const json& jo = j["objective"];
  ObjectiveSpec obj;
  obj.a = number_array(jo.value("a", json()), "objective.a");
  obj.b = number_array(jo.value("b", json()), "objective.b");
  std::string type = jo.value("type", "quadratic");
  if (type == "catalog") {
    std::string fname = jo.value("f", "");
    double level = 0.0;
    if (jo.contains("f_params") && jo["f_params"].is_object())
      level = jo["f_params"].value("M", 0.0);
    ConvexFunction f;
    if (!catalog::lookup(fname, level, &f))
      fail(ErrorCode::ParseError, "unknown catalog function '" + fname + "'");
    obj.f = std::move(f);
  } else if (type != "quadratic") {
    fail(ErrorCode::ParseError, "objective.type must be quadratic or catalog");
  }

  const json& jc = j["constraints"];
  ConstraintSpec cons;
  cons.n = static_cast<int>(obj.a.size());
  if (!jc.contains("R") || !jc["R"].is_number())
    fail(ErrorCode::ParseError, "constraints.R must be a number");
  cons.R = jc["R"].get<double>();
  std::string kind = jc.value("kind", "box");
  if (kind == "box") cons.kind = ConstraintKind::Box;
  else if (kind == "gbc") cons.kind = ConstraintKind::Gbc;
  else if (kind == "nested") cons.kind = ConstraintKind::Nested;
  else if (kind == "laminar") cons.kind = ConstraintKind::Laminar;
  else fail(ErrorCode::ParseError, "unknown constraint kind '" + kind + "'");

  cons.lower = bounds_array(jc.value("l", json()), cons.n, -kInf);
  cons.upper = bounds_array(jc.value("u", json()), cons.n, kInf);
  if (jc.contains("sets")) {
    if (!jc["sets"].is_array()) fail(ErrorCode::ParseError, "constraints.sets must be an array");
    for (const auto& js : jc["sets"]) {
      if (!js.is_array()) fail(ErrorCode::ParseError, "each set must be an array of indices");
      std::vector<int> s;
      for (const auto& e : js) {
        if (!e.is_number_integer()) fail(ErrorCode::ParseError, "set indices must be integers");
        s.push_back(e.get<int>() - 1);  // files are 1-based
      }
      cons.sets.push_back(std::move(s));
    }
    cons.set_lower = bounds_array(jc.value("L", json()), cons.num_sets(), -kInf);
    cons.set_upper = bounds_array(jc.value("U", json()), cons.num_sets(), kInf);
    if (cons.set_lower.empty()) cons.set_lower.assign(cons.num_sets(), -kInf);
    if (cons.set_upper.empty()) cons.set_upper.assign(cons.num_sets(), kInf);
  }

  std::string dom = j.value("domain", "continuous");
  VariableDomain vd;
  if (dom == "continuous") vd = VariableDomain::Continuous;
  else if (dom == "integer") vd = VariableDomain::Integer;
  else fail(ErrorCode::ParseError, "domain must be continuous or integer");

  return validate_instance(std::move(obj), std::move(cons), vd);
}

std::string emit_instance(const Instance& inst) {
  json jo;
  jo["type"] = inst.obj.quadratic() ? "quadratic" : "catalog";
  jo["a"] = inst.obj.a;
  jo["b"] = inst.obj.b;
  if (!inst.obj.quadratic()) {
    jo["f"] = inst.obj.f->name;
    if (inst.obj.f->param) jo["f_params"] = json{{"M", *inst.obj.f->param}};
  }

  json jc;
  jc["kind"] = to_string(inst.cons.kind);
  jc["R"] = inst.cons.R;
  json jl = json::array(), ju = json::array();
  for (double v : inst.cons.lower) jl.push_back(bound_to_json(v));
  for (double v : inst.cons.upper) ju.push_back(bound_to_json(v));
  jc["l"] = std::move(jl);
  jc["u"] = std::move(ju);
  if (!inst.cons.sets.empty()) {
    json jsets = json::array();
    for (const auto& s : inst.cons.sets) {
      json one = json::array();
      for (int v : s) one.push_back(v + 1);
      jsets.push_back(std::move(one));
    }
    jc["sets"] = std::move(jsets);
    json jL = json::array(), jU = json::array();
    for (double v : inst.cons.set_lower) jL.push_back(bound_to_json(v));
    for (double v : inst.cons.set_upper) jU.push_back(bound_to_json(v));
    jc["L"] = std::move(jL);
    jc["U"] = std::move(jU);
  }

  json j;
  j["objective"] = std::move(jo);
  j["constraints"] = std::move(jc);
  j["domain"] = to_string(inst.dom);
  return j.dump(2);
}

std::string emit_solution(const Solution& sol, double wall_ms) {
  json j;
  j["x"] = sol.x;
  j["objective"] = sol.objective_value;
  if (sol.lambda) j["lambda"] = *sol.lambda;
  else j["lambda"] = nullptr;
  j["certified"] = sol.certified;
  json jt = json::array();
  for (int t : sol.tight_sets) jt.push_back(t + 1);
  j["tight_sets"] = std::move(jt);
  j["solver"] = sol.solver;
  j["wall_ms"] = wall_ms;
  return j.dump(2);
}

std::vector<double> parse_solution_vector(const std::string& json_text) {
  json j = parse_text(json_text);
  if (!j.is_object() || !j.contains("x"))
    fail(ErrorCode::ParseError, "solution file needs an x array");
  return number_array(j["x"], "x");
}

// ---- application transforms ---------------------------------------------

namespace {

RouteSpec parse_route(const json& j) {
  RouteSpec r;
  r.leg_distance = number_array(j.value("distances", json()), "distances");
  r.window_open = bounds_array(j.value("window_open", json()),
                               static_cast<int>(r.leg_distance.size()) - 1, -kInf);
  r.window_close = bounds_array(j.value("window_close", json()),
                                static_cast<int>(r.leg_distance.size()) - 1, kInf);
  if (r.window_open.empty()) r.window_open.assign(r.leg_distance.size() - 1, -kInf);
  if (r.window_close.empty()) r.window_close.assign(r.leg_distance.size() - 1, kInf);
  r.t_start = j.value("t_start", 0.0);
  r.t_end = j.value("t_end", 0.0);
  r.v_min = j.value("v_min", 0.0);
  r.v_max = j.value("v_max", 0.0);
  return r;
}

TaskSpec parse_tasks(const json& j) {
  TaskSpec t;
  t.work = number_array(j.value("work", json()), "work");
  t.arrival = number_array(j.value("arrival", json()), "arrival");
  t.deadline = number_array(j.value("deadline", json()), "deadline");
  t.s_max = j.value("s_max", 0.0);
  return t;
}

StorageSpec parse_storage(const json& j) {
  StorageSpec s;
  s.baseline = number_array(j.value("baseline", json()), "baseline");
  s.n = static_cast<int>(s.baseline.size());
  s.dt = j.value("dt", 1.0);
  s.capacity = j.value("capacity", 0.0);
  s.s_start = j.value("s_start", 0.0);
  s.s_end = j.value("s_end", 0.0);
  s.x_min = j.value("x_min", 0.0);
  s.x_max = j.value("x_max", 0.0);
  std::string ob = j.value("objective", "flatten");
  if (ob == "flatten") s.objective = StorageObjective::Flatten;
  else if (ob == "autarky") s.objective = StorageObjective::Autarky;
  else if (ob == "peak") s.objective = StorageObjective::Peak;
  else fail(ErrorCode::ParseError, "storage objective must be flatten, autarky or peak");
  s.peak_level = j.value("peak_level", 0.0);
  return s;
}

StratifiedSpec parse_strata(const json& j) {
  StratifiedSpec s;
  s.stratum_size = number_array(j.value("sizes", json()), "sizes");
  s.variance = number_array(j.value("variances", json()), "variances");
  s.total_samples = j.value("R", 0LL);
  auto lo = number_array(j.value("lo", json()), "lo");
  auto hi = number_array(j.value("hi", json()), "hi");
  for (double v : lo) s.lo.push_back(static_cast<long long>(std::llround(v)));
  for (double v : hi) s.hi.push_back(static_cast<long long>(std::llround(v)));
  return s;
}

ChannelProblem parse_channel(const json& j) {
  ChannelProblem c;
  c.bandwidth = number_array(j.value("B", json()), "B");
  c.gain = number_array(j.value("c", json()), "c");
  if (j.contains("P_max"))
    c.power_cap = bounds_array(j["P_max"], static_cast<int>(c.bandwidth.size()), kInf);
  c.total_power = j.value("P_tot", 0.0);
  return c;
}

MsePowerProblem parse_mse(const json& j) {
  MsePowerProblem m;
  m.w = number_array(j.value("w", json()), "w");
  m.A = number_array(j.value("A", json()), "A");
  m.D = number_array(j.value("D", json()), "D");
  m.total_power = j.value("P_tot", 0.0);
  return m;
}

}  // namespace

TransformResult transform_app(const std::string& app_name, const std::string& spec_json) {
  json j = parse_text(spec_json);
  if (!j.is_object()) fail(ErrorCode::ParseError, "application spec must be a JSON object");

  TransformResult out;
  json rec;
  rec["app"] = app_name;
  rec["spec"] = j;

  if (app_name == "channel") {
    out.inst = channel_power_to_rap(parse_channel(j));
  } else if (app_name == "mse") {
    out.inst = mse_power_to_rap(parse_mse(j));
  } else if (app_name == "storage") {
    out.inst = storage_to_rap(parse_storage(j));
  } else if (app_name == "stratified") {
    StratifiedRap rap = stratified_to_rap(parse_strata(j));
    json kept = json::array(), pinned = json::array();
    for (int k : rap.kept) kept.push_back(k + 1);
    for (long long p : rap.pinned) pinned.push_back(p);
    rec["kept"] = std::move(kept);
    rec["pinned"] = std::move(pinned);
    out.inst = std::move(rap.inst);
  } else if (app_name == "vessel") {
    out.inst = vessel_to_rap(parse_route(j)).inst;
  } else if (app_name == "speedscale") {
    out.inst = speedscale_to_rap(parse_tasks(j)).inst;
  } else {
    fail(ErrorCode::ParseError, "unknown application '" + app_name + "'");
  }
  out.recovery_json = rec.dump(2);
  return out;
}

std::string recover_app(const std::string& recovery_json, const std::vector<double>& x) {
  json rec = parse_text(recovery_json);
  std::string app = rec.value("app", "");
  const json& spec = rec.contains("spec") ? rec["spec"] : json();
  json out;
  out["app"] = app;

  if (app == "channel" || app == "mse") {
    out["power"] = x;  // identity recovery
  } else if (app == "storage") {
    StorageSpec s = parse_storage(spec);
    StoragePlan plan = storage_recover(s, x);
    out["power"] = plan.power;
    out["level"] = plan.level;
    out["load"] = plan.load;
    out["within_capacity"] = plan.within_capacity;
    out["within_rates"] = plan.within_rates;
    out["reaches_target"] = plan.reaches_target;
  } else if (app == "stratified") {
    StratifiedSpec s = parse_strata(spec);
    StratifiedRap rap = stratified_to_rap(s);
    out["samples"] = stratified_recover(rap, x);
  } else if (app == "vessel") {
    RouteSpec r = parse_route(spec);
    VesselPlan plan = vessel_recover(r, x);
    out["leg_time"] = plan.leg_time;
    out["speed"] = plan.speed;
    out["arrival"] = plan.arrival;
    out["windows_met"] = plan.windows_met;
    out["speeds_within_limits"] = plan.speeds_within_limits;
    json vp = json::array();
    for (int p : plan.violated_ports) vp.push_back(p);
    out["violated_ports"] = std::move(vp);
  } else if (app == "speedscale") {
    TaskSpec t = parse_tasks(spec);
    SchedulePlan plan = speedscale_recover(t, x);
    out["exec_time"] = plan.exec_time;
    out["speed"] = plan.speed;
    out["start"] = plan.start;
    out["finish"] = plan.finish;
    out["deadlines_met"] = plan.deadlines_met;
    out["arrivals_respected"] = plan.arrivals_respected;
    out["speeds_within_limits"] = plan.speeds_within_limits;
  } else {
    fail(ErrorCode::ParseError, "unknown application '" + app + "'");
  }
  return out.dump(2);
}

}  // namespace rapkit

#include "mpimex/problems/registry.hpp"

#include <cmath>
#include <set>

#include "mpimex/errors.hpp"
#include "mpimex/problems/linear3.hpp"
#include "mpimex/problems/model2.hpp"
#include "mpimex/problems/piston.hpp"
#include "mpimex/problems/predprey.hpp"

namespace mpimex {

namespace {

double get(const std::map<std::string, double>& p, const std::string& key, double dflt) {
  auto it = p.find(key);
  return it == p.end() ? dflt : it->second;
}

void check_keys(const std::map<std::string, double>& p, const std::set<std::string>& allowed,
                const std::string& id) {
  for (const auto& [k, v] : p)
    if (!allowed.count(k)) throw RejectedInput("problem '" + id + "': unknown parameter '" + k + "'");
}

}  // namespace

ProblemInstance make_problem(const std::string& id, const std::map<std::string, double>& params) {
  ProblemInstance inst;
  inst.id = id;
  if (id == "linear3") {
    check_keys(params, {"t_final"}, id);
    inst.sys = Linear3Problem::system();
    inst.u0 = Linear3Problem::initial();
    inst.t1 = get(params, "t_final", 2.0);
    inst.exact = [](double t) { return Linear3Problem::exact(t); };
    inst.error_subsystem = -1;
    for (int i = 0; i < 3; ++i)
      inst.observables.emplace_back("u" + std::to_string(i + 1),
                                    [i](const PartitionedState& u) { return u.part(i)[0]; });
    return inst;
  }
  if (id == "model2") {
    check_keys(params, {"lambda1", "lambda2", "alpha", "t_final"}, id);
    Model2Problem prob;
    prob.lambda1 = get(params, "lambda1", -1.0);
    prob.lambda2 = get(params, "lambda2", -1.0);
    prob.alpha = get(params, "alpha", 0.5);
    inst.sys = prob.system();
    inst.u0 = prob.initial();
    inst.t1 = get(params, "t_final", 2.0);
    Vector u0v = {inst.u0.part(0)[0], inst.u0.part(1)[0]};
    inst.exact = [prob, u0v](double t) { return prob.exact(t, u0v); };
    inst.error_subsystem = -1;
    inst.observables.emplace_back("u1", [](const PartitionedState& u) { return u.part(0)[0]; });
    inst.observables.emplace_back("u2", [](const PartitionedState& u) { return u.part(1)[0]; });
    return inst;
  }
  if (id == "predprey") {
    check_keys(params, {"n", "t_final", "diffusivity", "a1", "a2", "a3", "a4", "v1x", "v1y", "v2x", "v2y"},
               id);
    PredPreyProblem prob;
    prob.n = static_cast<int>(get(params, "n", 20));
    prob.diffusivity = get(params, "diffusivity", 0.01);
    prob.a1 = get(params, "a1", 0.25);
    prob.a2 = get(params, "a2", 2.0);
    prob.a3 = get(params, "a3", 1.0);
    prob.a4 = get(params, "a4", 3.4);
    prob.v1x = get(params, "v1x", 0.0);
    prob.v1y = get(params, "v1y", 0.0);
    prob.v2x = get(params, "v2x", 0.5);
    prob.v2y = get(params, "v2y", 0.5);
    inst.sys = prob.system();
    inst.u0 = prob.initial();
    inst.t1 = get(params, "t_final", 1.0);
    inst.error_subsystem = 0;  // prey field
    inst.default_reference_dt = 3.125e-3;
    inst.observables.emplace_back("prey_max", [](const PartitionedState& u) { return norm_inf(u.part(0)); });
    inst.observables.emplace_back("predator_max",
                                  [](const PartitionedState& u) { return norm_inf(u.part(1)); });
    return inst;
  }
  if (id == "piston") {
    check_keys(params, {"cells", "t_final", "ms", "ks", "cs", "us0", "freeze_structure"}, id);
    PistonProblem prob;
    prob.cells = static_cast<int>(get(params, "cells", 128));
    prob.ms = get(params, "ms", 1.0);
    prob.ks = get(params, "ks", 1.0);
    prob.cs = get(params, "cs", 0.0);
    prob.us0 = get(params, "us0", -0.3);
    prob.freeze_structure = get(params, "freeze_structure", 0.0) != 0.0;
    inst.sys = prob.system();
    inst.u0 = prob.initial();
    inst.t1 = get(params, "t_final", 1.0);
    inst.error_subsystem = -1;
    inst.default_reference_dt = 6.25e-4;
    inst.observables.emplace_back("piston_velocity",
                                  [](const PartitionedState& u) { return u.part(0)[0]; });
    inst.observables.emplace_back("piston_displacement",
                                  [](const PartitionedState& u) { return u.part(0)[1]; });
    inst.observables.emplace_back("mesh_max", [](const PartitionedState& u) { return norm_inf(u.part(1)); });
    inst.observables.emplace_back("fluid_max", [](const PartitionedState& u) { return norm_inf(u.part(2)); });
    return inst;
  }
  if (id == "zero2") {
    check_keys(params, {"t_final"}, id);
    CoupledOdeSystem sys;
    sys.name = "zero2";
    for (int i = 0; i < 2; ++i) {
      Subsystem s;
      s.dim = 1;
      s.cdim = 1;
      s.name = "u" + std::to_string(i + 1);
      s.velocity = [](std::span<const double>, std::span<const double>, double) { return Vector{0.0}; };
      sys.subsystems.push_back(std::move(s));
    }
    sys.coupling = [](int, const PartitionedState&, double) { return Vector{0.0}; };
    inst.sys = std::move(sys);
    inst.u0 = PartitionedState({1, 1}, {1.0, -2.0});
    inst.t1 = get(params, "t_final", 1.0);
    inst.exact = [](double) { return Vector{1.0, -2.0}; };
    inst.observables.emplace_back("u1", [](const PartitionedState& u) { return u.part(0)[0]; });
    inst.observables.emplace_back("u2", [](const PartitionedState& u) { return u.part(1)[0]; });
    return inst;
  }
  throw RejectedInput("unknown problem id: " + id);
}

std::vector<std::string> problem_ids() { return {"linear3", "model2", "predprey", "piston", "zero2"}; }

}  // namespace mpimex

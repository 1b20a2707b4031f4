#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mpimex/system.hpp"

namespace mpimex {

// A builtin benchmark problem instantiated with concrete parameters.
struct ProblemInstance {
  std::string id;
  CoupledOdeSystem sys;
  PartitionedState u0;
  double t0 = 0.0;
  double t1 = 1.0;  // default final time
  std::function<Vector(double)> exact;  // null when no exact solution exists
  int error_subsystem = -1;  // error metric: inf-norm of this part (-1: all)
  double default_reference_dt = 0.0;  // self-reference step; 0 = dts.back()/8
  std::vector<std::pair<std::string, std::function<double(const PartitionedState&)>>> observables;
};

// ids: linear3, model2, predprey, piston, zero2. Unknown parameter keys are
// rejected; see each problem header for the accepted keys.
ProblemInstance make_problem(const std::string& id, const std::map<std::string, double>& params = {});

std::vector<std::string> problem_ids();

}  // namespace mpimex

#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <string>
#include <vector>

namespace sumrate {

// One solver iteration: the iterate at the start of iteration `iter`
// (1-based), the objective there, the constraint value gamma, the feasibility
// flag gamma <= 1 + tol, and the 0-based index of the active constraint
// member (for the power-domain solver: the argmax norm coordinate).
struct IterRecord {
  int iter = 0;
  double objective = 0.0;
  double gamma = 0.0;
  bool feasible = false;
  int active_index = 0;
  Eigen::VectorXd point;
};

// Dense per-iteration history of a solver run. `var_prefix` names the point
// columns in CSV output (r for rates, s for SINR targets, p for powers).
class IterTrace {
 public:
  IterTrace(std::string var_prefix, int dim);

  void add(IterRecord rec);
  const std::vector<IterRecord>& records() const { return records_; }
  const IterRecord& final_record() const;
  bool empty() const { return records_.empty(); }
  int dim() const { return dim_; }
  const std::string& var_prefix() const { return var_prefix_; }

  // Set when a box projection clamped some coordinate at the upper face,
  // which usually means the box bound is too tight for the instance.
  bool hit_box_bound() const { return hit_box_bound_; }
  void set_hit_box_bound() { hit_box_bound_ = true; }

  // Header `iter,objective,gamma,feasible,active_l,<prefix>_1..<prefix>_N`,
  // floats at 17 significant digits, active_l 1-based. A nonempty
  // `params_comment` is emitted first as a single '#' comment line.
  void write_csv(std::ostream& os, const std::string& params_comment = "") const;

 private:
  std::string var_prefix_;
  int dim_ = 0;
  bool hit_box_bound_ = false;
  std::vector<IterRecord> records_;
};

}  // namespace sumrate

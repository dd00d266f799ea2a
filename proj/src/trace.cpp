#include "sumrate/trace.hpp"

#include <cstdio>
#include <ostream>
#include <utility>

#include "sumrate/errors.hpp"

namespace sumrate {

IterTrace::IterTrace(std::string var_prefix, int dim)
    : var_prefix_(std::move(var_prefix)), dim_(dim) {
  if (dim_ < 1) {
    throw DimensionError("IterTrace: dimension must be at least 1");
  }
}

void IterTrace::add(IterRecord rec) {
  if (rec.point.size() != dim_) {
    throw DimensionError("IterTrace: record point size mismatch");
  }
  records_.push_back(std::move(rec));
}

const IterRecord& IterTrace::final_record() const {
  if (records_.empty()) {
    throw Error("IterTrace: no records");
  }
  return records_.back();
}

void IterTrace::write_csv(std::ostream& os, const std::string& params_comment) const {
  if (!params_comment.empty()) {
    os << "# " << params_comment << '\n';
  }
  os << "iter,objective,gamma,feasible,active_l";
  for (int i = 1; i <= dim_; ++i) {
    os << ',' << var_prefix_ << '_' << i;
  }
  os << '\n';
  char buf[64];
  const auto put = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    os << buf;
  };
  for (const auto& rec : records_) {
    os << rec.iter << ',';
    put(rec.objective);
    os << ',';
    put(rec.gamma);
    os << ',' << (rec.feasible ? 1 : 0) << ',' << rec.active_index + 1;
    for (int i = 0; i < dim_; ++i) {
      os << ',';
      put(rec.point[i]);
    }
    os << '\n';
  }
}

}  // namespace sumrate

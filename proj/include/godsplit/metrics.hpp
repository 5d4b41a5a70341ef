#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "godsplit/class_facts.hpp"
#include "godsplit/cluster.hpp"

namespace godsplit {

// max(P - Q, 0) where P counts method pairs sharing no instance variable and
// Q counts pairs sharing at least one.
std::size_t lcom(const std::vector<MethodFacts>& members);
std::size_t lcom(const ClassFacts& facts, const std::vector<MethodId>& members);

// External call sites of the members plus internal call sites leaving the
// member set. Throws IndexError on an unknown id.
std::size_t mpc(const std::vector<MethodId>& members, const ClassFacts& facts);

struct SubClassMetrics {
  int sub_class = 0;
  std::vector<MethodId> members;
  std::size_t lcom = 0;
  std::size_t mpc = 0;
};

struct MetricsReport {
  std::vector<SubClassMetrics> per_class;
  std::size_t original_lcom = 0;
  std::size_t original_mpc = 0;
  double mean_lcom = 0.0;
  double mean_mpc = 0.0;
};

// Throws DimensionMismatch if the partition does not label every method, and
// IndexError on a label outside 0..k-1.
MetricsReport evaluate(const ClassFacts& facts, const Partition& partition);

// sub_class,methods,lcom,mpc rows, then an "original" row and a "mean" row.
void write_report_csv(const MetricsReport& report, std::ostream& out);

// One-row table: Class | LCOM | MPC | #splits | LCOM per sub-class | MPC per sub-class.
void write_report_markdown(const MetricsReport& report, const std::string& class_name, std::ostream& out);

}  // namespace godsplit

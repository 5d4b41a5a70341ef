#include "godsplit/metrics.hpp"

#include <algorithm>
#include <type_traits>
#include <ostream>

#include "godsplit/error.hpp"
#include "godsplit/numfmt.hpp"

namespace godsplit {

namespace {

bool share_variable(const std::set<std::string>& a, const std::set<std::string>& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return true;
    if (*i < *j) ++i; else ++j;
  }
  return false;
}

template <typename T>
std::string join(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    if constexpr (std::is_same_v<T, std::string>) out += values[i];
    else out += std::to_string(values[i]);
  }
  return out;
}

}  // namespace

std::size_t lcom(const std::vector<MethodFacts>& members) {
  long long p = 0;
  long long q = 0;
  for (std::size_t i = 0; i < members.size(); ++i)
    for (std::size_t j = i + 1; j < members.size(); ++j)
      (share_variable(members[i].accessed_vars, members[j].accessed_vars) ? q : p) += 1;
  return p > q ? static_cast<std::size_t>(p - q) : 0;
}

std::size_t lcom(const ClassFacts& facts, const std::vector<MethodId>& members) {
  std::vector<MethodFacts> selected;
  selected.reserve(members.size());
  for (auto id : members) {
    if (id >= facts.size()) throw IndexError("no method with id " + std::to_string(id));
    selected.push_back(facts.methods[id]);
  }
  return lcom(selected);
}

std::size_t mpc(const std::vector<MethodId>& members, const ClassFacts& facts) {
  std::vector<bool> inside(facts.size(), false);
  for (auto id : members) {
    if (id >= facts.size()) throw IndexError("no method with id " + std::to_string(id));
    inside[id] = true;
  }
  std::size_t total = 0;
  for (auto id : members) {
    const auto& m = facts.methods[id];
    total += m.external_call_count;
    for (const auto& [callee, count] : m.internal_calls)
      if (callee >= facts.size() || !inside[callee]) total += count;
  }
  return total;
}

MetricsReport evaluate(const ClassFacts& facts, const Partition& partition) {
  if (partition.labels.size() != facts.size())
    throw DimensionMismatch("partition labels " + std::to_string(partition.labels.size()) + " methods, class has " +
                            std::to_string(facts.size()));
  if (partition.k < 1) throw IndexError("partition has no sub-classes");
  MetricsReport report;
  report.per_class.resize(static_cast<std::size_t>(partition.k));
  for (int c = 0; c < partition.k; ++c) report.per_class[static_cast<std::size_t>(c)].sub_class = c;
  for (std::size_t i = 0; i < partition.labels.size(); ++i) {
    const int label = partition.labels[i];
    if (label < 0 || label >= partition.k)
      throw IndexError("method " + std::to_string(i) + " has label " + std::to_string(label));
    report.per_class[static_cast<std::size_t>(label)].members.push_back(i);
  }
  std::vector<MethodId> all(facts.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  report.original_lcom = lcom(facts.methods);
  report.original_mpc = mpc(all, facts);
  for (auto& row : report.per_class) {
    row.lcom = lcom(facts, row.members);
    row.mpc = mpc(row.members, facts);
    report.mean_lcom += static_cast<double>(row.lcom);
    report.mean_mpc += static_cast<double>(row.mpc);
  }
  report.mean_lcom /= static_cast<double>(report.per_class.size());
  report.mean_mpc /= static_cast<double>(report.per_class.size());
  return report;
}

void write_report_csv(const MetricsReport& report, std::ostream& out) {
  out << "sub_class,methods,lcom,mpc\n";
  std::size_t total = 0;
  for (const auto& row : report.per_class) {
    out << row.sub_class << ',' << row.members.size() << ',' << row.lcom << ',' << row.mpc << '\n';
    total += row.members.size();
  }
  out << "original," << total << ',' << report.original_lcom << ',' << report.original_mpc << '\n';
  out << "mean," << format_double(static_cast<double>(total) / static_cast<double>(report.per_class.size())) << ','
      << format_double(report.mean_lcom) << ',' << format_double(report.mean_mpc) << '\n';
}

void write_report_markdown(const MetricsReport& report, const std::string& class_name, std::ostream& out) {
  std::vector<std::size_t> lcoms, mpcs;
  for (const auto& row : report.per_class) {
    lcoms.push_back(row.lcom);
    mpcs.push_back(row.mpc);
  }
  out << "| Class | LCOM | MPC | #splits | LCOM per sub-class | MPC per sub-class |\n"
      << "|---|---:|---:|---:|---|---|\n"
      << "| " << class_name << " | " << report.original_lcom << " | " << report.original_mpc << " | "
      << report.per_class.size() << " | " << join(lcoms) << " | " << join(mpcs) << " |\n";
}

}  // namespace godsplit

#pragma once

#include <string>
#include <vector>

#include "ncgw/params.hpp"

namespace ncgw {

// One place where a closed-form expression and the independent numerical
// evaluation disagree (or where the closed form is internally inconsistent).
struct Discrepancy {
  std::string id;            // short stable slug
  std::string quantity;      // what is being compared, named by role
  std::string formula_value; // the closed-form side, rendered as text
  std::string oracle_value;  // the numerical side
  double rel_diff;           // negative when not meaningful (structural)
  std::string verdict;       // "mismatch", "structural", "conditional", ...
  std::string note;
};

struct DiscrepancyReport {
  std::vector<Discrepancy> entries;
  std::string to_json() const; // pretty-printed, stable key order
};

// Rebuilds the full catalog by rerunning the comparisons at the given
// parameters plus a second parameter point that unmasks coefficient errors
// hidden by unit values.
DiscrepancyReport build_discrepancy_report(const PhysicalParams& p);

} // namespace ncgw

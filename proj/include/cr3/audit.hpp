#pragma once

#include <string>
#include <vector>

namespace cr3 {

/// One comparison between a printed closed form (or quoted value) and an
/// independent computation. pass means agreement within tol.
struct AuditEntry {
  std::string name;
  std::string where;  // parameters of the comparison
  double printed = 0.0;
  double computed = 0.0;
  double diff = 0.0;
  double tol = 0.0;
  bool pass = false;
  std::string note;
};

/// Every comparison the library knows about, in a fixed order.
std::vector<AuditEntry> discrepancy_report();

}  // namespace cr3

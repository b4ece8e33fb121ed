#pragma once

#include <string>
#include <vector>

namespace tw {

struct Check {
  std::string name;
  double value = 0;
  double tolerance = 0;
  bool pass = false;
  std::string note;
};

struct CertificateReport {
  std::vector<Check> checks;

  // Passes when value <= tolerance (NaN fails).
  Check& add(std::string name, double value, double tolerance, std::string note = {});
  // Informational entry that never fails.
  Check& info(std::string name, double value, std::string note = {});
  bool pass() const;
  const Check& at(const std::string& name) const;
  bool has(const std::string& name) const;
};

}  // namespace tw

#include "tautweight/certificate.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace tw {

Check& CertificateReport::add(std::string name, double value, double tolerance, std::string note) {
  checks.push_back({std::move(name), value, tolerance, value <= tolerance, std::move(note)});
  return checks.back();
}

Check& CertificateReport::info(std::string name, double value, std::string note) {
  checks.push_back({std::move(name), value, std::numeric_limits<double>::infinity(), true,
                    std::move(note)});
  return checks.back();
}

bool CertificateReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

const Check& CertificateReport::at(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return c;
  throw std::out_of_range("no check named " + name);
}

bool CertificateReport::has(const std::string& name) const {
  return std::any_of(checks.begin(), checks.end(), [&](const Check& c) { return c.name == name; });
}

}  // namespace tw

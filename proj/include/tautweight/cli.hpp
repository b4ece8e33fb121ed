#pragma once

#include "tautweight/weights.hpp"

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace tw::cli {

enum ExitCode { ok = 0, usage_error = 1, certificate_failure = 2 };

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kVersion = "1.0.0";

// args excludes the program name.
int parse_and_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int main_entry(int argc, char** argv);

// 64-bit FNV-1a as 16 hex digits.
std::string fnv1a_hex(std::string_view s);

// builtin:step | builtin:hat | builtin:constant:value=.. | builtin:power:beta=.. | <csv path>
Data parse_data(const std::string& spec);
// unit | power:d=.. | table:<csv path>
Weight parse_weight(const std::string& spec);
// builtin:step | builtin:spike[:exponent=..] | builtin:ramp-hat | builtin:hat | <csv path>
SampledFunction parse_ictv_data(const std::string& spec, int n);
// "a,b,c" or "lo:hi:count"; empty string gives an empty list.
std::vector<double> parse_list(const std::string& s);

// Deterministic file set `<command>-<hash>[-suffix].<ext>` plus a manifest.
class OutputSet {
 public:
  OutputSet(std::string dir, std::string command, std::map<std::string, std::string> params);
  const std::string& hash() const { return hash_; }
  // Returns the file name (relative to the directory).
  std::string write(const std::string& suffix, const std::string& ext, const std::string& content);
  std::string path(const std::string& name) const;
  void write_manifest(int exit_code, const std::map<std::string, double>& tolerances);

 private:
  std::string dir_, command_, hash_;
  std::map<std::string, std::string> params_;
  std::vector<std::string> files_;
};

// --out flag, else $TAUTWEIGHT_OUT, else "tautweight-out".
std::string output_dir(const std::string& flag);

}  // namespace tw::cli

#pragma once

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "tvl/problem.hpp"

namespace tvl::cli {

// Bad command line, config file or parameter value (exit code 1).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Flat key=value settings merged from a config file and command-line flags.
class Settings {
 public:
  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const;
  std::string str(const std::string& key, const std::string& fallback = "") const;
  double num(const std::string& key, double fallback) const;
  int integer(const std::string& key, int fallback) const;
  bool flag(const std::string& key, bool fallback = false) const;
  // Comma-separated list; "lo:hi:count" expands to an inclusive linspace.
  std::vector<double> list(const std::string& key, const std::vector<double>& fallback) const;
  Vec vec(const std::string& key) const;

  // Reads "key = value" lines; '#' starts a comment.
  void load_file(const std::string& path);

 private:
  std::map<std::string, std::string> values_;
};

// Every key accepted in a config file or as --key / --key-with-dashes.
const std::vector<std::string>& known_keys();

// Runs one subcommand. args excludes the program name. Exit codes: 0 ok,
// 1 usage, 2 numerical failure, 3 unresolved classification under --strict.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tvl::cli

#pragma once

// Named experiment runs over the fixture catalog. Each run writes a CSV
// artifact and a JSON report into the output directory and returns the report.

#include <cstdint>
#include <string>
#include <vector>

#include "opinion/common.hpp"
#include "opinion/io.hpp"

namespace opinion::reproduce {

struct Options {
  double tol_eig = kTolEig;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
  bool write_files = true;
};

struct RunReport {
  std::string name;
  std::string verdict;
  std::string expected;
  io::Json scalars = io::Json::object();
  std::vector<std::string> artifacts;

  [[nodiscard]] bool matches() const { return verdict == expected; }
  [[nodiscard]] io::Json json() const;
};

/// fig2a, fig2b, fig5, fig6, fig7a, fig7b, example-estimation.
[[nodiscard]] const std::vector<std::string>& names();

/// Throws ValidationError for unknown names.
[[nodiscard]] RunReport run(const std::string& name, const Options& opt = {});

}  // namespace opinion::reproduce

#pragma once

// Named systems used by the reproduce command and the tests.

#include <cstdint>
#include <string>
#include <vector>

#include "opinion/common.hpp"
#include "opinion/netcore.hpp"

namespace opinion::fixtures {

struct Fixture {
  std::string name;
  std::string description;
  netcore::SystemSpec system;
  Vector x0;  // length agents * issues
};

[[nodiscard]] const std::vector<Fixture>& catalog();

/// Throws ValidationError for unknown names.
[[nodiscard]] const Fixture& get(const std::string& name);

[[nodiscard]] std::vector<std::string> names();

// Raw matrices, also used by tests.
[[nodiscard]] Matrix sec5_stochastic();
[[nodiscard]] Matrix sec5_d1();
[[nodiscard]] Matrix sec5_d2();
[[nodiscard]] Vector sec5_lambda1();
[[nodiscard]] Vector sec5_lambda2();
[[nodiscard]] Matrix sec5_c1();
[[nodiscard]] Matrix sec5_c2();
/// Agent-major 4 agents x 2 issues.
[[nodiscard]] Vector sec5_x0();
/// Column p (0-based) of the agent-major initial opinions.
[[nodiscard]] Vector sec5_x0_issue(Index p);

[[nodiscard]] Matrix example1_laplacian();
[[nodiscard]] Matrix example1_appraisal();
[[nodiscard]] Vector example1_x0();

/// FNV-1a over the %.17g text of every fixture matrix and vector.
[[nodiscard]] std::uint64_t catalog_checksum();

}  // namespace opinion::fixtures

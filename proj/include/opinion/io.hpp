#pragma once

// CSV and JSON ingestion with line-level diagnostics, and the JSON/CSV
// renderings of every report type.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "opinion/common.hpp"
#include "opinion/estimate.hpp"
#include "opinion/netcore.hpp"
#include "opinion/simulate.hpp"
#include "opinion/spectral.hpp"
#include "opinion/stepsize.hpp"

namespace opinion::io {

using Json = nlohmann::ordered_json;

/// Comma-separated numbers; blank lines and lines starting with '#' skipped.
/// Throws ValidationError naming `source` and the 1-based line on bad input.
[[nodiscard]] Matrix parse_csv(const std::string& text, const std::string& source);
[[nodiscard]] Matrix read_csv(const std::string& path);

/// One row or one column.
[[nodiscard]] Vector read_vector_csv(const std::string& path);

[[nodiscard]] std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& content);

/// %.17g
[[nodiscard]] std::string format_double(double v);

struct LoadedSystem {
  netcore::SystemSpec system;
  std::optional<Vector> x0;
  std::string source;
};

/// Fields: lambda, laplacian (or stochastic + epsilon), appraisal, optional
/// mids, n_issues, x0.
[[nodiscard]] LoadedSystem parse_system_json(const std::string& text, const std::string& source);

/// A path to a system JSON file, or "fixture:NAME".
[[nodiscard]] LoadedSystem load_system(const std::string& spec);

[[nodiscard]] Json system_to_json(const netcore::SystemSpec& sys, const std::optional<Vector>& x0 = std::nullopt);

[[nodiscard]] Json to_json(const Matrix& m);
[[nodiscard]] Json to_json(const Vector& v);
[[nodiscard]] Json to_json(Complex c);
[[nodiscard]] Json to_json(const std::vector<Complex>& v);
/// Infinities become the strings "inf" / "-inf".
[[nodiscard]] Json number(double v);

[[nodiscard]] Json to_json(const spectral::SpectralReport& r);
[[nodiscard]] Json to_json(const spectral::MultiIssueReport& r);
[[nodiscard]] Json to_json(const stepsize::FeasibleRegion& r);
[[nodiscard]] Json to_json(const stepsize::EpsilonRange& r);
/// Excluded-root samples are summarised (count and range) unless `full`.
[[nodiscard]] Json to_json(const stepsize::StepSizeDiagnostics& d, bool full = false);
[[nodiscard]] Json to_json(const estimate::EstimationResult& r);
[[nodiscard]] Json to_json(const estimate::RecoveryMetrics& r);

/// Header k, xi_1..xi_M, spread; one row per stored state.
[[nodiscard]] std::string trajectory_csv(const simulate::Trajectory& traj);

/// Header rho, max_magnitude.
[[nodiscard]] std::string magnitude_csv(const std::vector<stepsize::MagnitudeSample>& samples);

[[nodiscard]] std::string matrix_csv(const Matrix& m);

}  // namespace opinion::io

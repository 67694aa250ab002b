#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace sle::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.3.0";

/// Files of one experiment run, written under `dir` as `<name>.<ext>`.
///
/// Result files carry no timestamps, so two runs of one configuration give
/// byte-identical results. Timing lives only in the manifest.
class RunOutput {
 public:
  /// `params` is the effective configuration; it is echoed into the manifest
  /// and into `<name>.config.toml` under the section `[<experiment>]`.
  /// Unseeded experiments pass no seed.
  RunOutput(std::filesystem::path dir, std::string name, std::string experiment,
            std::optional<std::uint64_t> seed, Json params);

  std::filesystem::path path(const std::string& ext) const;
  /// Writes `<name>.<ext>` through `fill` and records it.
  void write(const std::string& ext, const std::function<void(std::ostream&)>& fill);
  void write_json(const std::string& ext, const Json& value);

  /// Common header of every result JSON.
  Json result_header(double kappa) const;

  double elapsed_seconds() const;

  /// Writes the config echo and the manifest naming every output.
  void finish();

 private:
  std::filesystem::path dir_;
  std::string name_;
  std::string experiment_;
  std::optional<std::uint64_t> seed_;
  Json params_;
  std::vector<std::string> outputs_;
  std::chrono::system_clock::time_point started_;
  std::chrono::steady_clock::time_point clock_start_;
};

/// One fitted quantity with its reference value and acceptance band.
Json fit_entry(const std::string& quantity, double reference, double estimate, double stderr_,
               double lo, double hi);

/// TOML text of `params` as a single `[section]`, numbers at full precision.
std::string to_toml_section(const std::string& section, const Json& params);

/// Markdown table of every result JSON in `dir`: one row per fitted
/// quantity, sorted by experiment, then kappa.
std::string render_report(const std::filesystem::path& dir);

}  // namespace sle::cli

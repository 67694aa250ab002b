#include "sle_cli/output.hpp"

#include <algorithm>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <tuple>

#include "sle/error.hpp"

namespace sle::cli {

namespace fs = std::filesystem;

namespace {

std::string iso_time(std::chrono::system_clock::time_point t) {
  const std::time_t tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

// JSON numbers use the shortest round-trip form; non-finite values become null.
Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

RunOutput::RunOutput(fs::path dir, std::string name, std::string experiment,
                     std::optional<std::uint64_t> seed, Json params)
    : dir_(std::move(dir)),
      name_(std::move(name)),
      experiment_(std::move(experiment)),
      seed_(seed),
      params_(std::move(params)),
      started_(std::chrono::system_clock::now()),
      clock_start_(std::chrono::steady_clock::now()) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec || !fs::is_directory(dir_))
    throw ResourceError("cannot create output directory " + dir_.string());
}

fs::path RunOutput::path(const std::string& ext) const { return dir_ / (name_ + "." + ext); }

void RunOutput::write(const std::string& ext, const std::function<void(std::ostream&)>& fill) {
  const fs::path p = path(ext);
  std::ofstream out(p);
  if (!out) throw ResourceError("cannot write " + p.string());
  fill(out);
  out.flush();
  if (!out) throw ResourceError("failed writing " + p.string());
  outputs_.push_back(p.filename().string());
}

void RunOutput::write_json(const std::string& ext, const Json& value) {
  write(ext, [&](std::ostream& out) { out << value.dump(2) << '\n'; });
}

Json RunOutput::result_header(double kappa) const {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["experiment"] = experiment_;
  j["kappa"] = kappa;
  if (seed_) j["seed"] = *seed_;
  j["params"] = params_;
  return j;
}

double RunOutput::elapsed_seconds() const {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - clock_start_).count();
}

void RunOutput::finish() {
  write("config.toml", [&](std::ostream& out) { out << to_toml_section(experiment_, params_); });
  Json m;
  m["schema_version"] = kSchemaVersion;
  m["experiment"] = experiment_;
  m["tool_version"] = kToolVersion;
  if (seed_) m["seed"] = *seed_;
  m["params"] = params_;
  m["started"] = iso_time(started_);
  m["finished"] = iso_time(std::chrono::system_clock::now());
  m["elapsed_seconds"] = elapsed_seconds();
  m["outputs"] = outputs_;
  const fs::path p = path("manifest.json");
  std::ofstream out(p);
  if (!out) throw ResourceError("cannot write " + p.string());
  out << m.dump(2) << '\n';
}

Json fit_entry(const std::string& quantity, double reference, double estimate, double stderr_,
               double lo, double hi) {
  Json f;
  f["quantity"] = quantity;
  f["reference"] = number(reference);
  f["estimate"] = number(estimate);
  f["stderr"] = number(stderr_);
  f["accept"] = {{"lo", number(lo)}, {"hi", number(hi)}};
  f["pass"] = std::isfinite(estimate) && estimate >= lo && estimate <= hi;
  return f;
}

std::string to_toml_section(const std::string& section, const Json& params) {
  std::ostringstream os;
  os << '[' << section << "]\n";
  for (const auto& [key, value] : params.items()) {
    if (value.is_null()) continue;
    os << key << " = " << value.dump() << '\n';
  }
  return os.str();
}

std::string render_report(const fs::path& dir) {
  struct Row {
    std::string experiment;
    double kappa;
    std::string quantity, reference, estimate, stderr_, verdict;
  };
  auto cell = [](const Json& v) {
    if (!v.is_number()) return std::string("-");
    std::ostringstream os;
    os << std::setprecision(6) << v.get<double>();
    return os.str();
  };
  std::vector<Row> rows;
  if (fs::is_directory(dir)) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir))
      if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const fs::path& p : files) {
      std::ifstream in(p);
      const Json j = Json::parse(in, nullptr, false);
      if (j.is_discarded() || !j.contains("fits") || !j.contains("schema_version")) continue;
      for (const Json& f : j["fits"])
        rows.push_back({j.value("experiment", ""), j.value("kappa", -1.0), f.value("quantity", ""),
                        cell(f["reference"]), cell(f["estimate"]), cell(f["stderr"]),
                        f.value("pass", false) ? "pass" : "FAIL"});
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    return std::tie(a.experiment, a.kappa) < std::tie(b.experiment, b.kappa);
  });
  std::ostringstream os;
  os << "| experiment | kappa | quantity | reference | fitted | stderr | verdict |\n";
  os << "|---|---|---|---|---|---|---|\n";
  for (const Row& r : rows)
    os << "| " << r.experiment << " | "
       << (r.kappa < 0.0 ? std::string("-") : cell(Json(r.kappa))) << " | " << r.quantity
       << " | " << r.reference << " | " << r.estimate << " | " << r.stderr_ << " | "
       << r.verdict << " |\n";
  return os.str();
}

}  // namespace sle::cli

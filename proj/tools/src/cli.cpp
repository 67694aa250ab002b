#include "sle_cli/cli.hpp"

#include <CLI/CLI.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>

#include "sle/diffusion.hpp"
#include "sle/error.hpp"
#include "sle/estimators.hpp"
#include "sle/fit.hpp"
#include "sle/fractal.hpp"
#include "sle/io.hpp"
#include "sle/loewner.hpp"
#include "sle/parallel.hpp"
#include "sle/partition.hpp"
#include "sle/rng.hpp"
#include "sle_cli/output.hpp"

namespace sle::cli {

namespace {

constexpr double kPi = std::numbers::pi;

// Options shared by every experiment subcommand.
struct Common {
  std::string out = ".";
  std::string name;
  std::uint64_t seed = 1;
  double time_budget = 0.0;
  bool seeded = true;
};

void add_common(CLI::App* sub, Common& c, bool seeded) {
  c.seeded = seeded;
  sub->add_option("--out", c.out, "Output directory")->capture_default_str();
  sub->add_option("--name", c.name, "File name stem (default: the subcommand name)");
  if (seeded) sub->add_option("--seed", c.seed, "Master seed")->capture_default_str();
  sub->add_option("--time-budget", c.time_budget,
                  "Seconds; a longer run exits with the resource code (0: no limit)")
      ->check(CLI::NonNegativeNumber);
}

RunOutput open_output(const Common& c, const std::string& experiment, Json params) {
  std::optional<std::uint64_t> seed;
  if (c.seeded) params["seed"] = *(seed = c.seed);
  return RunOutput(c.out, c.name.empty() ? experiment : c.name, experiment, seed,
                   std::move(params));
}

void close_output(RunOutput& o, const Common& c) {
  o.finish();
  const double t = o.elapsed_seconds();
  if (c.time_budget > 0.0 && t > c.time_budget)
    throw ResourceError("run took " + std::to_string(t) + " s, over the budget of " +
                        std::to_string(c.time_budget) + " s");
}

EnsembleConfig ensemble(double horizon, std::size_t steps, std::size_t refine, unsigned threads) {
  EnsembleConfig c;
  c.horizon = horizon;
  c.steps = steps;
  c.refine = refine;
  c.threads = threads;
  return c;
}

Json fit_json(const LinearFit& f) {
  return {{"slope", f.slope}, {"stderr", f.slope_stderr}, {"r2", f.r_squared},
          {"n_points", f.n_points}};
}

// ---------------------------------------------------------------------------

struct TraceCmd {
  Common common;
  double kappa = 8.0 / 3.0;
  double horizon = 1.0;
  std::size_t steps = 1000;
  std::size_t refine = 1;
  double max_gap = 0.0;
  bool zero_driving = false;
  bool svg = false;

  void add(CLI::App* sub) {
    sub->add_option("--kappa", kappa)->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--horizon", horizon)->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--steps", steps)->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--refine", refine, "Samples per slit")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--max-gap", max_gap, "Bisect until samples are this close (0: off)")
        ->check(CLI::NonNegativeNumber);
    sub->add_flag("--zero-driving", zero_driving, "Use W = 0");
    sub->add_flag("--svg", svg, "Also write an SVG polyline");
    add_common(sub, common, true);
  }

  Json params() const {
    return {{"kappa", kappa},   {"horizon", horizon},        {"steps", steps},
            {"refine", refine}, {"max-gap", max_gap},        {"zero-driving", zero_driving},
            {"svg", svg}};
  }

  void run(unsigned) {
    RunOutput o = open_output(common, "trace", params());
    const DrivingPath driving = zero_driving ? DrivingPath::zero(kappa, horizon, steps)
                                             : sample_driving(kappa, horizon, steps, common.seed);
    TraceOptions opt;
    opt.refine = refine;
    opt.max_gap = max_gap;
    const TracePath trace = compute_trace(driving, opt);
    o.write("csv", [&](std::ostream& s) { io::write_trace_csv(s, trace); });
    if (svg) o.write("svg", [&](std::ostream& s) { io::write_trace_svg(s, trace); });
    Json j = o.result_header(kappa);
    j["points"] = trace.size();
    j["mesh"] = trace.mesh();
    j["diameter"] = trace.diameter();
    j["tip"] = {trace.points.back().real(), trace.points.back().imag()};
    o.write_json("json", j);
    close_output(o, common);
  }
};

struct SurvivalCmd {
  Common common;
  double kappa = 2.0;
  double alpha0 = kPi;
  double smin = 1.0;
  double smax = 6.0;
  std::size_t points = 11;
  std::size_t paths = 10000;
  double ds = 1e-4;
  double boundary_eps = AlphaOptions{}.boundary_eps;
  double substep = AlphaOptions{}.substep;

  void add(CLI::App* sub) {
    sub->add_option("--kappa", kappa)->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--alpha0", alpha0, "Start angle in (0, 2 pi)")->capture_default_str();
    sub->add_option("--smin", smin, "First time of the fit grid")->capture_default_str();
    sub->add_option("--smax", smax, "Last time of the fit grid")->capture_default_str();
    sub->add_option("--points", points, "Grid size")->capture_default_str();
    sub->add_option("--paths", paths)->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--ds", ds)->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--boundary-eps", boundary_eps, "Absorbing band (<= 0: automatic)");
    sub->add_option("--substep", substep, "Adaptive substep factor (0: plain Euler)")
        ->check(CLI::NonNegativeNumber);
    add_common(sub, common, true);
  }

  Json params() const {
    return {{"kappa", kappa}, {"alpha0", alpha0}, {"smin", smin},
            {"smax", smax},   {"points", points}, {"paths", paths},
            {"ds", ds},       {"boundary-eps", boundary_eps}, {"substep", substep}};
  }

  void run(unsigned threads) {
    require(points >= 3, "the decay fit needs at least 3 grid points");
    require(smin > 0.0 && smax >= smin, "need 0 < smin <= smax");
    std::vector<double> grid(points);
    for (std::size_t i = 0; i < points; ++i)
      grid[i] = points == 1 ? smax
                            : smin + (smax - smin) * static_cast<double>(i) /
                                         static_cast<double>(points - 1);
    RunOutput o = open_output(common, "survival", params());
    AlphaOptions opt;
    opt.boundary_eps = boundary_eps;
    opt.substep = substep;
    const SurvivalEstimate est =
        survival_curve(kappa, alpha0, grid, paths, ds, common.seed, threads, opt);
    o.write("csv", [&](std::ostream& s) { io::write_survival_csv(s, est); });
    const PowerLawFit f = fit_exponential_decay(est.s_grid, est.probs);
    const double ref = hull_exponent(kappa);
    Json j = o.result_header(kappa);
    j["reference_lambda"] = ref;
    j["lambda_hat"] = -f.slope;
    j["fit"] = fit_json(f);
    j["dropped"] = f.dropped;
    j["fits"] = Json::array(
        {fit_entry("decay_rate", ref, -f.slope, f.slope_stderr, 0.9 * ref, 1.1 * ref)});
    o.write_json("json", j);
    close_output(o, common);
  }
};

struct EigenCmd {
  Common common;
  double kappa = 4.0;
  std::size_t grid = 2048;

  void add(CLI::App* sub) {
    sub->add_option("--kappa", kappa)->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--grid", grid, "Interior grid points")
        ->check(CLI::Range(std::size_t{64}, std::size_t{1} << 24))
        ->capture_default_str();
    add_common(sub, common, false);
  }

  Json params() const { return {{"kappa", kappa}, {"grid", grid}}; }

  void run(unsigned) {
    RunOutput o = open_output(common, "eigen", params());
    const double ref = hull_exponent(kappa);
    const double r1 = eigenfunction_residual(kappa, grid);
    const double r2 = eigenfunction_residual(kappa, 2 * grid);
    Json j = o.result_header(kappa);
    j["reference_lambda"] = ref;
    j["residual"] = r1;
    j["residual_doubled"] = r2;
    Json fits = Json::array();
    if (r1 > 0.0 && r2 > 0.0) {
      const double order = std::log2(r1 / r2);
      j["residual_order"] = order;
      fits.push_back(fit_entry("residual_order", 2.0, order, 0.0, 1.8, 2.2));
    }
    if (kappa < 8.0) {
      const SpectralResult s = leading_eigenvalue(kappa, grid);
      j["lambda_hat"] = s.lambda_hat;
      j["sweeps"] = s.sweeps;
      fits.push_back(fit_entry("eigenvalue", ref, s.lambda_hat, 0.0, ref - 0.02 * std::abs(ref),
                               ref + 0.02 * std::abs(ref)));
      o.write("csv", [&](std::ostream& out) {
        out << "x,phi\n" << std::setprecision(17);
        const double h = 2.0 * kPi / static_cast<double>(s.eigenvector.size() + 1);
        for (std::size_t i = 0; i < s.eigenvector.size(); ++i)
          out << h * static_cast<double>(i + 1) << ',' << s.eigenvector[i] << '\n';
      });
    }
    j["fits"] = fits;
    o.write_json("json", j);
    close_output(o, common);
  }
};

// Options shared by the trace-ensemble estimators.
struct EnsembleOpts {
  std::size_t paths = 1000;
  double horizon = 0.0;
  std::size_t steps = 0;
  std::size_t refine = EnsembleConfig{}.refine;

  void add(CLI::App* sub) {
    sub->add_option("--paths", paths)->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--horizon", horizon, "Capacity time per trace (0: 4 |z|^2)")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--steps", steps, "Driving steps per trace (0: 500 per unit time)");
    sub->add_option("--refine", refine, "Samples per slit")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  }
  void echo(Json& j) const {
    j["paths"] = paths;
    j["horizon"] = horizon;
    j["steps"] = steps;
    j["refine"] = refine;
  }
};

struct HittingCmd {
  Common common;
  EnsembleOpts ens;
  double kappa = 2.0;
  std::vector<double> z0{0.0, 1.0};
  std::vector<double> eps{0.2, 0.1, 0.05, 0.025};
  bool stability = false;

  void add(CLI::App* sub) {
    sub->add_option("--kappa", kappa)->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--z0", z0, "Target point as RE,IM")->expected(2)->delimiter(',');
    sub->add_option("--eps", eps, "Radii")->expected(1, 64)->delimiter(',');
    sub->add_flag("--stability", stability, "Repeat at twice the horizon and compare");
    ens.add(sub);
    add_common(sub, common, true);
  }

  Json params() const {
    Json j{{"kappa", kappa}, {"z0", z0}, {"eps", eps}, {"stability", stability}};
    ens.echo(j);
    return j;
  }

  void run(unsigned threads) {
    const Complex z(z0.at(0), z0.at(1));
    RunOutput o = open_output(common, "hitting", params());
    const EnsembleConfig cfg = ensemble(ens.horizon, ens.steps, ens.refine, threads);
    const HittingEstimate est =
        hitting_probability_mc(z, eps, kappa, ens.paths, cfg, common.seed);
    o.write("csv", [&](std::ostream& s) {
      s << "eps,prob,stderr\n" << std::setprecision(17);
      for (std::size_t i = 0; i < eps.size(); ++i)
        s << eps[i] << ',' << est.probs[i] << ',' << est.stderrs[i] << '\n';
    });
    const PowerLawFit f = fit_power_law(eps, est.probs);
    const double ref = hull_exponent(kappa);
    Json j = o.result_header(kappa);
    j["resolved"] = {{"horizon", est.horizon}, {"steps", est.steps}, {"refine", est.refine}};
    j["trace_mesh"] = est.trace_mesh;
    j["points"] = Json::array();
    for (std::size_t i = 0; i < eps.size(); ++i)
      j["points"].push_back({{"eps", eps[i]}, {"prob", est.probs[i]}, {"stderr", est.stderrs[i]}});
    j["fit"] = fit_json(f);
    j["dropped"] = f.dropped;
    j["fits"] = Json::array(
        {fit_entry("eps_slope", ref, f.slope, f.slope_stderr, 0.8 * ref, 1.2 * ref)});
    j["warnings"] = est.warnings;
    if (stability) {
      const EnsembleConfig cfg2 = ensemble(2.0 * est.horizon, 2 * est.steps, ens.refine, threads);
      const HittingEstimate longer =
          hitting_probability_mc(z, eps, kappa, ens.paths, cfg2, common.seed);
      double max_diff = 0.0, max_z = 0.0;
      for (std::size_t i = 0; i < eps.size(); ++i) {
        const double d = longer.probs[i] - est.probs[i];
        const double se = std::hypot(est.stderrs[i], longer.stderrs[i]);
        max_diff = std::max(max_diff, std::abs(d));
        if (se > 0.0) max_z = std::max(max_z, std::abs(d) / se);
      }
      j["stability"] = {{"horizon", longer.horizon},
                        {"probs", longer.probs},
                        {"max_abs_diff", max_diff},
                        {"max_z", max_z}};
    }
    o.write_json("json", j);
    close_output(o, common);
  }
};

struct AngleCmd {
  Common common;
  EnsembleOpts ens;
  double kappa = 6.0;
  double modulus = 1.0;
  std::vector<double> angles{kPi / 6, kPi / 3, kPi / 2, 2 * kPi / 3, 5 * kPi / 6};
  double eps = 0.1;

  void add(CLI::App* sub) {
    sub->add_option("--kappa", kappa)->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--modulus", modulus)->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--angles", angles, "Angles in (0, pi)")->expected(1, 64)->delimiter(',');
    sub->add_option("--eps", eps)->check(CLI::PositiveNumber)->capture_default_str();
    ens.add(sub);
    ens.paths = 2000;
    add_common(sub, common, true);
  }

  Json params() const {
    Json j{{"kappa", kappa}, {"modulus", modulus}, {"angles", angles}, {"eps", eps}};
    ens.echo(j);
    return j;
  }

  void run(unsigned threads) {
    RunOutput o = open_output(common, "angle", params());
    const auto res = angle_profile(kappa, modulus, angles, eps, ens.paths,
                                   ensemble(ens.horizon, ens.steps, ens.refine, threads),
                                   common.seed);
    o.write("csv", [&](std::ostream& s) {
      s << "angle,prob,stderr\n" << std::setprecision(17);
      for (const auto& a : res) s << a.angle << ',' << a.prob << ',' << a.std_error << '\n';
    });
    Json j = o.result_header(kappa);
    j["points"] = Json::array();
    for (const auto& a : res)
      j["points"].push_back({{"angle", a.angle}, {"prob", a.prob}, {"stderr", a.std_error}});
    Json fits = Json::array();
    // First angle against the one closest to pi/2.
    std::size_t mid = 0;
    for (std::size_t i = 0; i < res.size(); ++i)
      if (std::abs(res[i].angle - kPi / 2) < std::abs(res[mid].angle - kPi / 2)) mid = i;
    const double b = boundary_exponent(kappa);
    if (mid != 0 && res[mid].prob > 0.0) {
      const double ref =
          std::pow(std::sin(res[0].angle), b) / std::pow(std::sin(res[mid].angle), b);
      const double ratio = res[0].prob / res[mid].prob;
      const double se = ratio * std::hypot(res[0].std_error / std::max(res[0].prob, 1e-300),
                                           res[mid].std_error / res[mid].prob);
      // The band is absolute: at fixed modulus Im z varies with the angle, so
      // the full density ratio lies above the boundary factor ref.
      fits.push_back(fit_entry("angle_ratio", ref, ratio, se, 0.6, 1.05));
      j["density_ratio"] = phi1(std::polar(modulus, res[0].angle), kappa) /
                           phi1(std::polar(modulus, res[mid].angle), kappa);
    }
    // Worst asymmetry between theta and pi - theta, in joint standard errors.
    double worst = -1.0;
    for (std::size_t i = 0; i < res.size(); ++i)
      for (std::size_t k = i + 1; k < res.size(); ++k)
        if (std::abs(res[i].angle + res[k].angle - kPi) < 1e-9) {
          const double se = std::hypot(res[i].std_error, res[k].std_error);
          const double d = std::abs(res[i].prob - res[k].prob);
          worst = std::max(worst, se > 0.0 ? d / se : (d > 0.0 ? INFINITY : 0.0));
        }
    if (worst >= 0.0) fits.push_back(fit_entry("reflection_z", 0.0, worst, 0.0, 0.0, 3.0));
    j["fits"] = fits;
    o.write_json("json", j);
    close_output(o, common);
  }
};

struct TwoPointCmd {
  Common common;
  EnsembleOpts ens;
  double kappa = 8.0 / 3.0;
  std::vector<double> separations{0.25, 0.5, 1.0};
  double height = 1.0;
  std::vector<double> eps{0.025, 0.05, 0.1};

  void add(CLI::App* sub) {
    sub->add_option("--kappa", kappa)->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--separations", separations,
                    "Distances d of the pairs -d/2 + i h, d/2 + i h")
        ->expected(1, 64)
        ->delimiter(',');
    sub->add_option("--height", height, "Common imaginary part h")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--eps", eps, "Radii")->expected(1, 64)->delimiter(',');
    ens.add(sub);
    ens.paths = 2000;
    ens.horizon = 2.0;
    ens.steps = 2000;
    add_common(sub, common, true);
  }

  Json params() const {
    Json j{{"kappa", kappa}, {"separations", separations}, {"height", height}, {"eps", eps}};
    ens.echo(j);
    return j;
  }

  void run(unsigned threads) {
    std::vector<PointPair> pairs;
    for (const double d : separations) {
      require(d > 0.0, "separations must be positive");
      pairs.push_back({Complex(-d / 2, height), Complex(d / 2, height)});
    }
    RunOutput o = open_output(common, "twopoint", params());
    const auto table = two_point_table(pairs, eps, kappa, ens.paths,
                                       ensemble(ens.horizon, ens.steps, ens.refine, threads),
                                       common.seed);
    o.write("csv", [&](std::ostream& s) {
      s << "separation,eps,prob,stderr,prob_z,prob_zp\n" << std::setprecision(17);
      for (std::size_t p = 0; p < pairs.size(); ++p)
        for (std::size_t e = 0; e < eps.size(); ++e) {
          const TwoPointEstimate& t = table[p][e];
          s << separations[p] << ',' << eps[e] << ',' << t.prob << ',' << t.std_error << ','
            << t.prob_z << ',' << t.prob_zp << '\n';
        }
    });
    Json j = o.result_header(kappa);
    j["points"] = Json::array();
    for (std::size_t p = 0; p < pairs.size(); ++p)
      for (std::size_t e = 0; e < eps.size(); ++e) {
        const TwoPointEstimate& t = table[p][e];
        j["points"].push_back({{"separation", separations[p]}, {"eps", eps[e]},
                               {"prob", t.prob}, {"stderr", t.std_error},
                               {"prob_z", t.prob_z}, {"prob_zp", t.prob_zp}});
      }
    const double s = hull_exponent(kappa);
    Json fits = Json::array();
    if (pairs.size() * eps.size() >= 3) {
      const TwoPointExponents x = two_point_exponents(pairs, eps, table, ens.paths);
      j["dropped"] = x.dropped;
      fits.push_back(fit_entry("eps_slope", 2 * s, x.eps_fit.slope, x.eps_fit.slope_stderr,
                               0.825 * 2 * s, 1.2 * 2 * s));
      fits.push_back(fit_entry("separation_slope", -s, x.separation_fit.slope,
                               x.separation_fit.slope_stderr, -1.5 * s, -0.6 * s));
    }
    j["fits"] = fits;
    o.write_json("json", j);
    close_output(o, common);
  }
};

struct BoxdimCmd {
  Common common;
  double kappa = 8.0 / 3.0;
  double horizon = 1.0;
  std::size_t steps = 100000;
  std::vector<double> eps;
  double max_gap = 0.0;
  std::size_t paths = 1;
  bool zero_driving = false;

  void add(CLI::App* sub) {
    sub->add_option("--kappa", kappa)->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--horizon", horizon)->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--steps", steps)->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--eps", eps, "Box sizes (default: 2^-3 .. 2^-7 in half powers)")
        ->expected(1, 64)
        ->delimiter(',');
    sub->add_option("--max-gap", max_gap, "Trace gap filling (0: min eps / 5)")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--paths", paths, "Traces to average")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_flag("--zero-driving", zero_driving, "Straight segment control");
    add_common(sub, common, true);
  }

  std::vector<double> eps_list() const {
    if (!eps.empty()) return eps;
    std::vector<double> e;
    for (int i = 6; i <= 14; ++i) e.push_back(std::exp2(-0.5 * i));
    return e;
  }

  Json params() const {
    return {{"kappa", kappa},       {"horizon", horizon}, {"steps", steps},
            {"eps", eps_list()},    {"max-gap", max_gap}, {"paths", paths},
            {"zero-driving", zero_driving}};
  }

  void run(unsigned threads) {
    const std::vector<double> e = eps_list();
    require(!e.empty(), "eps list is empty");
    RunOutput o = open_output(common, "boxdim", params());
    TraceOptions opt;
    opt.max_gap = max_gap > 0.0 ? max_gap : *std::min_element(e.begin(), e.end()) / 5.0;
    std::vector<DimensionReport> reports(paths);
    parallel_for(paths, threads, [&](std::size_t i) {
      const DrivingPath d = zero_driving
                                ? DrivingPath::zero(kappa, horizon, steps)
                                : sample_driving(kappa, horizon, steps,
                                                 stream_seed(common.seed, i));
      reports[i] = dimension_fit(compute_trace(d, opt), e);
    });
    o.write("csv", [&](std::ostream& s) { io::write_box_count_csv(s, reports[0].table); });
    double mean = 0.0, sq = 0.0;
    for (const auto& r : reports) mean += r.d_hat();
    mean /= static_cast<double>(paths);
    for (const auto& r : reports) sq += (r.d_hat() - mean) * (r.d_hat() - mean);
    const double se = paths > 1 ? std::sqrt(sq / static_cast<double>(paths - 1) /
                                            static_cast<double>(paths))
                                : reports[0].fit.slope_stderr;
    if (paths > 1)
      o.write("paths.csv", [&](std::ostream& s) {
        s << "path,d_hat,fine_slope,coarse_slope,trace_mesh\n" << std::setprecision(17);
        for (std::size_t i = 0; i < paths; ++i)
          s << i << ',' << reports[i].d_hat() << ',' << reports[i].fine_slope << ','
            << reports[i].coarse_slope << ',' << reports[i].trace_mesh << '\n';
      });
    const double ref = zero_driving ? 1.0 : trace_dimension(kappa);
    Json j = o.result_header(kappa);
    j["n_steps"] = steps;
    j["eps_range"] = {*std::min_element(e.begin(), e.end()), *std::max_element(e.begin(), e.end())};
    j["D_hat"] = mean;
    j["stderr"] = se;
    j["spread"] = reports[0].spread();
    j["trace_mesh"] = reports[0].trace_mesh;
    j["points"] = Json::array();
    for (std::size_t i = 0; i < reports[0].table.eps_list.size(); ++i)
      j["points"].push_back(
          {{"eps", reports[0].table.eps_list[i]}, {"count", reports[0].table.counts[i]}});
    const double lo = zero_driving ? 0.95 : 0.9 * ref;
    const double hi = zero_driving ? 1.05 : 1.09 * ref;
    j["fits"] = Json::array({fit_entry("box_dimension", ref, mean, se, lo, hi)});
    o.write_json("json", j);
    close_output(o, common);
  }
};

struct SwallowCmd {
  Common common;
  double kappa = 9.0;
  double horizon = 20.0;
  std::size_t steps = 20000;
  std::size_t seeds = 50;

  void add(CLI::App* sub) {
    sub->add_option("--kappa", kappa)->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--horizon", horizon)->check(CLI::NonNegativeNumber)->capture_default_str();
    sub->add_option("--steps", steps)->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--seeds", seeds, "Driving paths to average")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    add_common(sub, common, true);
  }

  Json params() const {
    return {{"kappa", kappa}, {"horizon", horizon}, {"steps", steps}, {"seeds", seeds}};
  }

  void run(unsigned threads) {
    RunOutput o = open_output(common, "swallow", params());
    const std::vector<Complex> grid = standard_swallow_grid();
    std::vector<double> frac(seeds);
    parallel_for(seeds, threads, [&](std::size_t i) {
      frac[i] = swallow_fraction(kappa, grid, horizon, steps, stream_seed(common.seed, i));
    });
    o.write("csv", [&](std::ostream& s) {
      s << "path,fraction\n" << std::setprecision(17);
      for (std::size_t i = 0; i < seeds; ++i) s << i << ',' << frac[i] << '\n';
    });
    double mean = 0.0, sq = 0.0;
    for (const double f : frac) mean += f;
    mean /= static_cast<double>(seeds);
    for (const double f : frac) sq += (f - mean) * (f - mean);
    const double se =
        seeds > 1 ? std::sqrt(sq / static_cast<double>(seeds - 1) / static_cast<double>(seeds))
                  : 0.0;
    Json j = o.result_header(kappa);
    j["grid_points"] = grid.size();
    j["mean_fraction"] = mean;
    j["stderr"] = se;
    // Simple curves never swallow; otherwise any fraction is admissible.
    const bool simple = kappa <= 4.0;
    j["fits"] = Json::array({fit_entry("swallow_fraction", simple ? 0.0 : NAN, mean, se, 0.0,
                                       simple ? 0.0 : 1.0)});
    o.write_json("json", j);
    close_output(o, common);
  }
};

struct PartitionCmd {
  Common common;
  int kmax = 12;
  PartitionWeights w;
  std::uint64_t budget = kDefaultPartitionBudget;

  void add(CLI::App* sub) {
    sub->add_option("--kmax", kmax, "Largest k1 and k2")
        ->check(CLI::Range(1, 40))
        ->capture_default_str();
    sub->add_option("--a", w.a)->capture_default_str();
    sub->add_option("--c", w.c)->capture_default_str();
    sub->add_option("--alpha", w.alpha)->capture_default_str();
    sub->add_option("--beta", w.beta)->capture_default_str();
    sub->add_option("--gamma", w.gamma)->capture_default_str();
    sub->add_option("--budget", budget, "Largest number of terms per sum")
        ->capture_default_str();
    add_common(sub, common, false);
  }

  Json params() const {
    return {{"kmax", kmax},         {"a", w.a},         {"c", w.c},
            {"alpha", w.alpha},     {"beta", w.beta},   {"gamma", w.gamma},
            {"budget", budget}};
  }

  void run(unsigned) {
    // Validate weights and the largest enumeration before any work.
    require(w.a > 0.0 && w.a < 1.0, "a must lie in (0, 1)");
    require(w.c > 0.0 && w.alpha > 0.0 && w.beta > 0.0 && w.gamma > 0.0,
            "c and the exponents must be positive");
    if (composition_pair_count(kmax, kmax) > budget)
      throw ResourceError("kmax " + std::to_string(kmax) + " needs " +
                          std::to_string(composition_pair_count(kmax, kmax)) +
                          " terms, over the budget");
    RunOutput o = open_output(common, "partition", params());
    std::vector<double> sums, ratios;
    double lo = INFINITY, hi = 0.0;
    for (int k1 = 1; k1 <= kmax; ++k1)
      for (int k2 = 1; k2 <= kmax; ++k2) {
        sums.push_back(partition_sum(k1, k2, w, budget));
        ratios.push_back(sums.back() / std::pow(w.a, w.alpha * k1 / 2.0 + w.beta * k2));
        lo = std::min(lo, ratios.back());
        hi = std::max(hi, ratios.back());
      }
    o.write("csv", [&](std::ostream& s) {
      s << "k1,k2,sum,ratio\n" << std::setprecision(17);
      std::size_t i = 0;
      for (int k1 = 1; k1 <= kmax; ++k1)
        for (int k2 = 1; k2 <= kmax; ++k2, ++i)
          s << k1 << ',' << k2 << ',' << sums[i] << ',' << ratios[i] << '\n';
    });
    const double base = ratios.front();
    Json j = o.result_header(0.0);
    j.erase("kappa");
    j["max_ratio"] = hi;
    j["min_ratio"] = lo;
    j["base_ratio"] = base;
    j["max_over_min"] = hi / lo;
    j["fits"] = Json::array({fit_entry("max_ratio_over_base", NAN, hi / base, 0.0, 0.0, 10.0)});
    o.write_json("json", j);
    close_output(o, common);
  }
};

struct ReportCmd {
  std::string dir = ".";
  std::string out;

  void add(CLI::App* sub) {
    sub->add_option("dir", dir, "Directory of result JSON files")->capture_default_str();
    sub->add_option("--out", out, "Markdown file (default: standard output)");
  }

  void run(std::ostream& stdout_) {
    const std::string md = render_report(dir);
    if (out.empty()) {
      stdout_ << md;
      return;
    }
    std::ofstream f(out);
    if (!f) throw ResourceError("cannot write " + out);
    f << md;
  }
};

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Monte Carlo and spectral experiments on chordal SLE traces", "sle"};
  app.set_config("--config", "", "TOML file; flags override its values");
  app.require_subcommand(1);
  unsigned threads = 0;
  app.add_option("--threads", threads, "Worker cap (0: SLE_THREADS or all cores)");
  app.set_version_flag("--version", kToolVersion);

  TraceCmd trace;
  SurvivalCmd survival;
  EigenCmd eigen;
  HittingCmd hitting;
  AngleCmd angle;
  TwoPointCmd twopoint;
  BoxdimCmd boxdim;
  SwallowCmd swallow;
  PartitionCmd partition;
  ReportCmd report;

  std::map<CLI::App*, std::function<void()>> handlers;
  auto sub = [&](const char* name, const char* help, auto& cmd) {
    CLI::App* s = app.add_subcommand(name, help);
    cmd.add(s);
    if constexpr (requires { cmd.run(threads); })
      handlers[s] = [&cmd, &threads] { cmd.run(threads); };
    else
      handlers[s] = [&cmd, &out] { cmd.run(out); };
  };
  sub("trace", "Sample one trace; CSV and optional SVG", trace);
  sub("survival", "Survival of the angular diffusion and its decay rate", survival);
  sub("eigen", "Spectral eigenvalue and eigenfunction residual", eigen);
  sub("hitting", "One-point hitting probabilities and their eps exponent", hitting);
  sub("angle", "Hitting probability against the argument of the target", angle);
  sub("twopoint", "Two-point hitting exponents in eps and separation", twopoint);
  sub("boxdim", "Box-counting dimension of traces", boxdim);
  sub("swallow", "Fraction of a fixed grid swallowed by the hull", swallow);
  sub("partition", "Composition-pair partition sums and their ratios", partition);
  sub("report", "Markdown table of the result JSON files in a directory", report);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : static_cast<int>(ExitCode::usage);
  }
  try {
    for (CLI::App* s : app.get_subcommands()) handlers.at(s)();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(e.exit_code());
  } catch (const std::bad_alloc&) {
    err << "error: out of memory\n";
    return static_cast<int>(ExitCode::resource);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::numerical);
  }
  return 0;
}

}  // namespace sle::cli

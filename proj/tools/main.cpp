// bwmean: command-line front end for the Bures-Wasserstein mean library.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "bwmean/barycenter.hpp"
#include "bwmean/errors.hpp"
#include "bwmean/json_writer.hpp"
#include "bwmean/lie_trotter.hpp"
#include "bwmean/means_geometry.hpp"
#include "bwmean/problem_io.hpp"
#include "bwmean/suite.hpp"

namespace {

enum ExitCode : int { kOk = 0, kCheckFailure = 1, kNoConvergence = 2, kInputError = 3 };

using namespace bwm;

MeanProblem load(const std::string& path) { return read_problem_file(path).problem; }

void write_verdict(JsonWriter& w, const char* name, const LoewnerVerdict& v) {
  w.key(name).begin_object();
  w.key("holds").value(v.holds);
  w.key("witness").value(v.witness);
  w.key("threshold").value(v.threshold);
  w.end_object();
}

int run_mean(const std::string& input, const std::string& method, double tol, int max_iter,
             const std::string& init) {
  const MeanProblem p = load(input);
  JsonWriter w;
  w.begin_object();
  w.key("method").value(method);
  if (method == "arithmetic" || method == "harmonic") {
    const SpdMatrix m = method == "arithmetic" ? arithmetic_mean(p) : harmonic_mean(p);
    w.key("mean").matrix(m);
    w.key("determinant").value(determinant(m));
    w.end_object();
    std::cout << w.str();
    return kOk;
  }
  SolverConfig cfg;
  cfg.rel_tol = tol;
  cfg.max_iter = max_iter;
  cfg.initial = init == "identity" ? InitialPoint::kIdentity : InitialPoint::kArithmeticMean;
  const SolverResult r = method == "wasserstein" ? wasserstein_mean(p, cfg) : karcher_mean(p, cfg);
  w.key("mean").matrix(r.mean);
  w.key("determinant").value(determinant(r.mean));
  w.key("iterations").value(r.iterations);
  w.key("residual").value(r.residual);
  w.key("converged").value(r.converged);
  w.key("residual_history").numbers(r.residual_history);
  w.end_object();
  std::cout << w.str();
  return r.converged ? kOk : kNoConvergence;
}

const MeanProblem& require_pair(const MeanProblem& p, const std::string& cmd) {
  if (p.size() != 2) throw InputError(cmd + ": input must contain exactly 2 matrices, found " + std::to_string(p.size()));
  return p;
}

int run_geodesic(const std::string& input, double t) {
  const MeanProblem p = load(input);
  require_pair(p, "geodesic");
  const SpdMatrix g = wasserstein_geodesic(p[0], p[1], GeodesicParam(t));
  JsonWriter w;
  w.begin_object();
  w.key("t").value(t);
  w.key("geodesic").matrix(g);
  w.end_object();
  std::cout << w.str();
  return kOk;
}

int run_distance(const std::string& input, const std::string& metric) {
  const MeanProblem p = load(input);
  require_pair(p, "distance");
  const double d = metric == "wasserstein" ? wasserstein_distance(p[0], p[1]) : riemannian_distance(p[0], p[1]);
  std::cout << format_number(d) << "\n";
  return kOk;
}

int run_bounds(const std::string& input) {
  const MeanProblem p = load(input);
  const BoundsReport b = bounds_report(p);
  const SolverResult r = wasserstein_mean(p);
  JsonWriter w;
  w.begin_object();
  w.key("lower_lie_trotter").matrix(b.lower_lie_trotter);
  w.key("upper_arithmetic").matrix(b.upper_arithmetic);
  w.key("upper_inverse");
  if (b.upper_inverse) w.matrix(*b.upper_inverse);
  else w.null();
  w.key("opnorm_bound").value(b.opnorm_bound);
  w.key("mean").matrix(r.mean);
  w.key("mean_converged").value(r.converged);
  const BoundsVerdicts v = check_bounds(b, r.mean);
  w.key("verdicts").begin_object();
  write_verdict(w, "arithmetic_upper", v.arithmetic_upper);
  write_verdict(w, "lie_trotter_lower", v.lie_trotter_lower);
  if (v.inverse_upper) write_verdict(w, "inverse_upper", *v.inverse_upper);
  w.key("opnorm").begin_object();
  w.key("holds").value(v.opnorm_holds);
  w.key("mean_opnorm").value(v.mean_opnorm);
  w.end_object();
  w.end_object();
  w.key("chains").begin_array();
  for (const auto& link : bound_ordering_checks(p)) {
    w.begin_object();
    w.key("name").value(link.name);
    w.key("holds").value(link.holds);
    w.key("witness").value(link.witness);
    w.end_object();
  }
  w.end_array();
  w.end_object();
  std::cout << w.str();
  if (!r.converged) return kNoConvergence;
  return v.all_hold() ? kOk : kCheckFailure;
}

std::vector<double> parse_schedule(const std::string& text) {
  const std::string prefix = "dyadic:";
  if (text.rfind(prefix, 0) != 0) throw InputError("--schedule: expected dyadic:K");
  int count = 0;
  try {
    std::size_t used = 0;
    count = std::stoi(text.substr(prefix.size()), &used);
    if (used != text.size() - prefix.size()) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw InputError("--schedule: bad count in '" + text + "'");
  }
  if (count < 1 || count > 40) throw InputError("--schedule: count must be in [1, 40]");
  return dyadic_schedule(count);
}

int run_lie_trotter(const std::string& input, const std::string& schedule_text, bool mirror) {
  const MeanProblem p = load(input);
  std::vector<CurveSpec> curves;
  for (const auto& a : p.matrices()) curves.push_back(CurveSpec::power(a));
  const auto schedule = parse_schedule(schedule_text);
  const LieTrotterTrace trace = convergence_trace(p.weights(), curves, schedule, {}, mirror);

  std::cout << "# target exp(sum w log A)\n";
  for (std::size_t i = 0; i < trace.target.dim(); ++i) {
    std::cout << "#";
    for (std::size_t j = 0; j < trace.target.dim(); ++j) std::cout << " " << format_number(trace.target(i, j));
    std::cout << "\n";
  }
  std::cout << (mirror ? "s\terror\terror_neg\n" : "s\terror\n");
  bool complete = true;
  auto cell = [&](const std::optional<double>& e) {
    if (!e) complete = false;
    return e ? format_number(*e) : std::string("NA");
  };
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    std::cout << format_number(schedule[k]) << "\t" << cell(trace.errors[k]);
    if (mirror) std::cout << "\t" << cell(trace.mirror_errors[k]);
    std::cout << "\n";
  }
  return complete ? kOk : kNoConvergence;
}

struct VerifyOptions {
  std::string suite = "all";
  std::uint64_t seed = 42;
  int count = 200;
  int n_min = 1, n_max = 5, dim_min = 2, dim_max = 8;
  double kappa = 100.0;
  std::optional<std::uint64_t> instance_seed;
  std::size_t instance_index = 0;
  std::string out;
  bool failures_only = false;
};

int run_verify(const VerifyOptions& o) {
  EnsembleSpec spec{o.seed, o.count, {o.n_min, o.n_max}, {o.dim_min, o.dim_max}, o.kappa};
  const auto suites = parse_suite_selector(o.suite);
  SuiteReport report;
  if (o.instance_seed) {
    spec.validate();
    report = SuiteReport{spec, suites, {}};
    for (SuiteKind k : suites) {
      auto recs = run_instance(k, spec, *o.instance_seed, o.instance_index);
      report.records.insert(report.records.end(), recs.begin(), recs.end());
    }
  } else {
    report = run_suite(spec, suites);
  }
  const std::string doc = report.to_json(o.failures_only);
  if (o.out.empty()) {
    std::cout << doc;
  } else {
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw InputError(o.out + ": cannot open for writing");
    f << doc;
  }
  std::cerr << report.summary_text();
  return report.all_passed() ? kOk : kCheckFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bures-Wasserstein means of symmetric positive definite matrices"};
  app.require_subcommand(1);

  std::string input;
  std::string method = "wasserstein";
  double tol = 1e-12;
  int max_iter = 500;
  std::string init = "arith";
  auto* mean = app.add_subcommand("mean", "Weighted mean of the matrices in a problem file");
  mean->add_option("--method", method)->check(CLI::IsMember({"wasserstein", "karcher", "arithmetic", "harmonic"}));
  mean->add_option("--input", input, "Problem file")->required();
  mean->add_option("--tol", tol, "Relative residual tolerance")->check(CLI::PositiveNumber);
  mean->add_option("--max-iter", max_iter)->check(CLI::Range(1, 1000000));
  mean->add_option("--init", init)->check(CLI::IsMember({"arith", "identity"}));

  double t = 0.5;
  auto* geodesic = app.add_subcommand("geodesic", "Point on the Wasserstein geodesic between two matrices");
  geodesic->add_option("--input", input)->required();
  geodesic->add_option("--t", t)->required()->check(CLI::Range(0.0, 1.0));

  std::string metric = "wasserstein";
  auto* distance = app.add_subcommand("distance", "Distance between two matrices");
  distance->add_option("--metric", metric)->check(CLI::IsMember({"wasserstein", "riemannian"}));
  distance->add_option("--input", input)->required();

  auto* bounds = app.add_subcommand("bounds", "Upper and lower bounds with Loewner verdicts");
  bounds->add_option("--input", input)->required();

  std::string schedule = "dyadic:10";
  bool mirror = false;
  auto* lie = app.add_subcommand("lie-trotter", "Convergence trace of Omega(w; A^s)^{1/s}");
  lie->add_option("--input", input)->required();
  lie->add_option("--schedule", schedule, "dyadic:K for s = 2^-1 .. 2^-K");
  lie->add_flag("--mirror", mirror, "Also evaluate at -s");

  VerifyOptions vo;
  std::uint64_t instance_seed_value = 0;
  auto* verify = app.add_subcommand("verify", "Run the property suites over a seeded ensemble");
  verify->add_option("--suite", vo.suite, "all, or comma-separated of metric, geomean, fixed-point, two-point, "
                                          "bounds, det, invariance, lie-trotter");
  verify->add_option("--seed", vo.seed);
  verify->add_option("--count", vo.count)->check(CLI::NonNegativeNumber);
  verify->add_option("--n-min", vo.n_min);
  verify->add_option("--n-max", vo.n_max);
  verify->add_option("--dim-min", vo.dim_min);
  verify->add_option("--dim-max", vo.dim_max);
  verify->add_option("--kappa", vo.kappa, "Largest condition number in the ensemble");
  auto* inst = verify->add_option("--instance-seed", instance_seed_value, "Re-run a single recorded instance");
  verify->add_option("--instance-index", vo.instance_index);
  verify->add_option("--out", vo.out, "Write the report here instead of stdout");
  verify->add_flag("--failures-only", vo.failures_only, "Only list failing records");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    if (*mean) return run_mean(input, method, tol, max_iter, init);
    if (*geodesic) return run_geodesic(input, t);
    if (*distance) return run_distance(input, metric);
    if (*bounds) return run_bounds(input);
    if (*lie) return run_lie_trotter(input, schedule, mirror);
    if (*verify) {
      if (inst->count() > 0) vo.instance_seed = instance_seed_value;
      return run_verify(vo);
    }
  } catch (const SolverError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNoConvergence;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "cidg/analysis.hpp"
#include "cidg/errors.hpp"
#include "cidg/fields.hpp"
#include "cidg/trajectory.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalidSpec = 2;
constexpr int kExitSolverFailure = 3;
constexpr int kExitDomainError = 4;
constexpr int kExitIoError = 5;

std::string fmt(double value) {
  std::array<char, 32> buffer;
  const auto [ptr, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  return ec == std::errc{} ? std::string(buffer.data(), ptr) : std::string("nan");
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> values;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string token =
        text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size())
      throw std::invalid_argument("malformed number in list: '" + token + "'");
    values.push_back(value);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return values;
}

cidg::Vec3 parse_triple(const std::string& text, const char* what) {
  const std::vector<double> values = parse_double_list(text);
  if (values.size() != 3)
    throw std::invalid_argument(std::string(what) + " expects three comma-separated numbers");
  return {values[0], values[1], values[2]};
}

struct SimulateOptions {
  std::string experiment;
  std::string method;
  std::optional<double> h;
  std::optional<long> steps;
  long sample_every = 1;
  double fp_tol = 1e-14;
  int fp_max_iter = 200;
  double eta = cidg::kDefaultEta;
  std::optional<std::string> x0;
  std::optional<std::string> v0;
  std::string out;
  std::string gnuplot;
  bool full = false;
};

void write_gnuplot_script(const cidg::TrajectoryRecord& record, const std::string& csv_path,
                          const std::string& script_path) {
  std::ofstream out(script_path, std::ios::binary);
  if (!out) throw cidg::io_error("cannot open for writing: " + script_path);
  out << "set datafile separator ','\n"
      << "set xlabel 't'\n"
      << "set ylabel 'invariant error'\n"
      << "set key left top\n"
      << "plot \\\n";
  const std::size_t n = record.invariant_names.size();
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t column = 9 + n + k;  // 1-based: after step,t,state and the value columns
    out << "  '" << csv_path << "' using 2:" << column << " with lines title '"
        << record.invariant_names[k] << " error'";
    out << (k + 1 < n ? ", \\\n" : "\n");
  }
  if (!out) throw cidg::io_error("failed while writing: " + script_path);
}

int run_simulate(const SimulateOptions& opt) {
  const auto experiment_id = cidg::experiment_from_string(opt.experiment);
  if (!experiment_id) throw std::invalid_argument("unknown experiment id: " + opt.experiment);
  const auto method = cidg::method_from_string(opt.method);
  if (!method) throw std::invalid_argument("unknown method id: " + opt.method);
  if (!opt.gnuplot.empty() && opt.out.empty())
    throw std::invalid_argument("--gnuplot requires --out (the script references the CSV file)");

  cidg::RunSpec spec = cidg::RunSpec::defaults_for(*experiment_id, opt.full);
  spec.method = *method;
  if (opt.h) spec.h = *opt.h;
  if (opt.steps) spec.steps = *opt.steps;
  spec.sample_every = opt.sample_every;
  spec.fp_tol = opt.fp_tol;
  spec.fp_max_iter = opt.fp_max_iter;
  spec.eta = opt.eta;
  if (opt.x0) {
    const cidg::Vec3 x = parse_triple(*opt.x0, "--x0");
    spec.initial[0] = x.x;
    spec.initial[1] = x.y;
    spec.initial[2] = x.z;
  }
  if (opt.v0) {
    const cidg::Vec3 v = parse_triple(*opt.v0, "--v0");
    spec.initial[3] = v.x;
    spec.initial[4] = v.y;
    spec.initial[5] = v.z;
  }
  spec.out_path = opt.out;

  const cidg::TrajectoryRecord record = cidg::run(spec);
  if (opt.out.empty()) cidg::write_csv(record, std::cout);
  if (!opt.gnuplot.empty()) write_gnuplot_script(record, opt.out, opt.gnuplot);

  std::cerr << "simulate: " << opt.experiment << "/" << opt.method << " h=" << fmt(spec.h)
            << " steps=" << spec.steps << " rows=" << record.row_count()
            << " wall=" << fmt(record.wall_seconds) << "s";
  if (record.max_fp_iterations > 0)
    std::cerr << " max-fp-iterations=" << record.max_fp_iterations;
  std::cerr << "\n";
  return kExitOk;
}

int run_drift(const std::string& in_path, const std::string& invariant, bool absolute) {
  const cidg::TrajectoryRecord record = cidg::read_csv(in_path);
  const cidg::DriftFit fit = cidg::drift_fit(record, invariant, absolute);
  std::cout << "invariant,slope,intercept,r_squared,samples,degenerate\n"
            << invariant << ',' << fmt(fit.slope) << ',' << fmt(fit.intercept) << ','
            << fmt(fit.r_squared) << ',' << fit.samples << ',' << (fit.degenerate ? 1 : 0)
            << "\n";
  return kExitOk;
}

int run_converge(const std::string& experiment, const std::string& method_name,
                 const std::string& h_list_text, double t_end, double fp_tol, int fp_max_iter) {
  const auto experiment_id = cidg::experiment_from_string(experiment);
  if (!experiment_id) throw std::invalid_argument("unknown experiment id: " + experiment);
  const auto method = cidg::method_from_string(method_name);
  if (!method) throw std::invalid_argument("unknown method id: " + method_name);

  cidg::IntegratorConfig solver;
  solver.fp_tol = fp_tol;
  solver.fp_max_iter = fp_max_iter;
  const cidg::ConvergenceStudy study =
      cidg::convergence_study(*experiment_id, *method, parse_double_list(h_list_text), t_end,
                              solver);

  std::cout << "h,global_error,observed_order\n";
  for (const auto& row : study.rows) {
    std::cout << fmt(row.h) << ',' << fmt(row.global_error) << ',';
    if (!std::isnan(row.observed_order)) std::cout << fmt(row.observed_order);
    std::cout << "\n";
  }
  if (!study.completed) {
    std::cerr << "converge: aborted at h=" << fmt(study.failed_h) << ": " << study.failure
              << "\n";
    return study.failure_kind == cidg::run_error::Kind::solver ? kExitSolverFailure
                                                               : kExitDomainError;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-preserving charged-particle integrators (CIDG family, Boris, RK4)"};
  app.require_subcommand(1);

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Integrate an experiment and emit a CSV trajectory");
  simulate->set_help_flag("--help", "print help");  // frees -h; the step size is --h
  simulate->add_option("--experiment", sim.experiment, "drift2d | energy-test | tokamak")->required();
  simulate->add_option("--method", sim.method, "cidg1 | cidg2 | cidgc | boris | rk4")->required();
  double h_value = 0.0;
  long steps_value = 0;
  auto* h_opt = simulate->add_option("--h", h_value, "step size (defaults per experiment)");
  auto* steps_opt = simulate->add_option("--steps", steps_value, "step count (defaults per experiment, desk scale)");
  simulate->add_option("--sample-every", sim.sample_every, "record every n-th step")->capture_default_str();
  simulate->add_option("--fp-tol", sim.fp_tol, "fixed-point tolerance")->capture_default_str();
  simulate->add_option("--fp-max-iter", sim.fp_max_iter, "fixed-point iteration cap")->capture_default_str();
  simulate->add_option("--eta", sim.eta, "degenerate-increment threshold (relative)")->capture_default_str();
  std::string x0_text, v0_text;
  auto* x0_opt = simulate->add_option("--x0", x0_text, "initial position a,b,c");
  auto* v0_opt = simulate->add_option("--v0", v0_text, "initial velocity a,b,c");
  simulate->add_option("--out", sim.out, "CSV output path (stdout when omitted)");
  simulate->add_option("--gnuplot", sim.gnuplot, "write a gnuplot script for the error columns (needs --out)");
  simulate->add_flag("--full", sim.full, "paper-scale step count instead of the desk-scale cap");

  std::string drift_in, drift_invariant;
  bool drift_abs = false;
  auto* drift = app.add_subcommand("drift", "Least-squares fit of an invariant error against t");
  drift->add_option("--in", drift_in, "trajectory CSV produced by simulate")->required();
  drift->add_option("--invariant", drift_invariant, "invariant column name, e.g. H")->required();
  drift->add_flag("--abs", drift_abs, "fit |error| instead of the signed error");

  std::string conv_experiment, conv_method, conv_h_list;
  double conv_t_end = 0.0;
  double conv_fp_tol = 1e-14;
  int conv_fp_max_iter = 200;
  auto* converge = app.add_subcommand("converge", "Global-error convergence table against an RK4 reference");
  converge->add_option("--experiment", conv_experiment, "drift2d | energy-test | tokamak")->required();
  converge->add_option("--method", conv_method, "cidg1 | cidg2 | cidgc | boris | rk4")->required();
  converge->add_option("--h-list", conv_h_list, "comma-separated step sizes, e.g. 0.08,0.04,0.02")->required();
  converge->add_option("--t-end", conv_t_end, "final time; t-end/h must be integral")->required();
  converge->add_option("--fp-tol", conv_fp_tol, "fixed-point tolerance")->capture_default_str();
  converge->add_option("--fp-max-iter", conv_fp_max_iter, "fixed-point iteration cap")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalidSpec;
  }

  try {
    if (simulate->parsed()) {
      if (*h_opt) sim.h = h_value;
      if (*steps_opt) sim.steps = steps_value;
      if (*x0_opt) sim.x0 = x0_text;
      if (*v0_opt) sim.v0 = v0_text;
      return run_simulate(sim);
    }
    if (drift->parsed()) return run_drift(drift_in, drift_invariant, drift_abs);
    if (converge->parsed())
      return run_converge(conv_experiment, conv_method, conv_h_list, conv_t_end, conv_fp_tol,
                          conv_fp_max_iter);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidSpec;
  } catch (const cidg::run_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == cidg::run_error::Kind::solver ? kExitSolverFailure : kExitDomainError;
  } catch (const cidg::solver_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolverFailure;
  } catch (const cidg::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomainError;
  } catch (const cidg::io_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIoError;
  }
  return kExitInvalidSpec;
}

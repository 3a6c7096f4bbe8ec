#include "cidg/trajectory.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include "cidg/errors.hpp"

namespace cidg {

namespace {

constexpr long kDeskScaleSteps = 100000;

std::string format_double(double value) {
  std::array<char, 32> buffer;
  const auto [ptr, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  if (ec != std::errc{}) throw io_error("failed to format a double");
  return std::string(buffer.data(), ptr);
}

double parse_double(std::string_view token) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size())
    throw io_error("malformed float field: '" + std::string(token) + "'");
  return value;
}

long parse_long(std::string_view token) {
  long value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size())
    throw io_error("malformed integer field: '" + std::string(token) + "'");
  return value;
}

std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

void append_sample(TrajectoryRecord& record, const FieldModel& model, long step, double t,
                   const PhasePoint& z, const std::vector<double>& reference) {
  record.step.push_back(step);
  record.t.push_back(t);
  record.state.push_back(z.coords);
  for (std::size_t k = 0; k < model.invariant_evaluators.size(); ++k) {
    const double value = model.invariant_evaluators[k].second(z);
    record.invariants[k].push_back(value);
    record.invariant_errors[k].push_back(value - reference[k]);
  }
}

}  // namespace

RunSpec RunSpec::defaults_for(ExperimentId id, bool full_scale) {
  const ExperimentDefaults defaults = experiment_defaults(id);
  RunSpec spec;
  spec.experiment = to_string(id);
  spec.method = Method::cidgc;
  spec.h = defaults.h;
  spec.steps = full_scale ? defaults.steps_full : std::min(defaults.steps_full, kDeskScaleSteps);
  spec.initial = defaults.initial;
  return spec;
}

void RunSpec::validate() const {
  if (!experiment_from_string(experiment))
    throw std::invalid_argument("unknown experiment id: " + experiment);
  if (steps < 1) throw std::invalid_argument("steps must be >= 1");
  if (sample_every < 1) throw std::invalid_argument("sample_every must be >= 1");
  if (!initial.is_finite()) throw std::invalid_argument("initial state must be finite");
  IntegratorConfig cfg{h, fp_tol, fp_max_iter, eta};
  cfg.validate();
}

std::size_t TrajectoryRecord::invariant_index(std::string_view name) const {
  for (std::size_t k = 0; k < invariant_names.size(); ++k)
    if (invariant_names[k] == name) return k;
  throw std::invalid_argument("no such invariant column: " + std::string(name));
}

TrajectoryRecord run(const RunSpec& spec) {
  spec.validate();
  const FieldModel& model = experiment(spec.experiment);
  const IntegratorConfig cfg{spec.h, spec.fp_tol, spec.fp_max_iter, spec.eta};

  TrajectoryRecord record;
  for (const auto& [name, evaluate] : model.invariant_evaluators)
    record.invariant_names.push_back(name);
  record.invariants.resize(record.invariant_names.size());
  record.invariant_errors.resize(record.invariant_names.size());

  std::vector<double> reference;
  for (const auto& [name, evaluate] : model.invariant_evaluators)
    reference.push_back(evaluate(spec.initial));

  const auto flush = [&record, &spec] {
    if (!spec.out_path.empty()) write_csv(record, spec.out_path);
  };

  const auto started = std::chrono::steady_clock::now();
  PhasePoint z = spec.initial;
  append_sample(record, model, 0, 0.0, z, reference);
  for (long n = 1; n <= spec.steps; ++n) {
    try {
      const StepOutcome out = advance(model, spec.method, z, cfg);
      record.max_fp_iterations = std::max(record.max_fp_iterations, out.fp_iterations);
      z = out.next;
    } catch (const solver_error& e) {
      flush();
      throw run_error(run_error::Kind::solver, n, e.what());
    } catch (const domain_error& e) {
      flush();
      throw run_error(run_error::Kind::domain, n, e.what());
    }
    if (n % spec.sample_every == 0) append_sample(record, model, n, n * spec.h, z, reference);
  }
  record.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  // Soft contraction check: the paper-scale workloads should stay well
  // inside the Picard regime.
  if (record.max_fp_iterations > 60)
    std::cerr << "warning: fixed-point solve needed " << record.max_fp_iterations
              << " iterations (> 60) on " << spec.experiment << "/" << to_string(spec.method)
              << "\n";

  flush();
  return record;
}

void write_csv(const TrajectoryRecord& record, std::ostream& out) {
  out << "step,t,x,y,z,v1,v2,v3";
  for (const auto& name : record.invariant_names) out << ',' << name;
  for (const auto& name : record.invariant_names) out << ',' << name << "_err";
  out << '\n';

  for (std::size_t r = 0; r < record.row_count(); ++r) {
    out << record.step[r] << ',' << format_double(record.t[r]);
    for (double c : record.state[r]) out << ',' << format_double(c);
    for (const auto& column : record.invariants) out << ',' << format_double(column[r]);
    for (const auto& column : record.invariant_errors) out << ',' << format_double(column[r]);
    out << '\n';
  }
  if (!out) throw io_error("failed while writing CSV stream");
}

void write_csv(const TrajectoryRecord& record, const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary: keep LF endings everywhere
  if (!out) throw io_error("cannot open for writing: " + path);
  write_csv(record, out);
  out.flush();
  if (!out) throw io_error("failed while writing: " + path);
}

TrajectoryRecord read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw io_error("empty CSV: no header");
  const auto header = split_csv_line(line);
  constexpr std::size_t kFixed = 8;  // step,t,x,y,z,v1,v2,v3
  static const char* kFixedNames[kFixed] = {"step", "t", "x", "y", "z", "v1", "v2", "v3"};
  if (header.size() < kFixed || (header.size() - kFixed) % 2 != 0)
    throw io_error("unexpected CSV column count in header");
  for (std::size_t i = 0; i < kFixed; ++i)
    if (header[i] != kFixedNames[i]) throw io_error("unexpected CSV header column: " + std::string(header[i]));

  TrajectoryRecord record;
  const std::size_t n_inv = (header.size() - kFixed) / 2;
  for (std::size_t k = 0; k < n_inv; ++k) {
    const std::string name(header[kFixed + k]);
    const std::string err_name(header[kFixed + n_inv + k]);
    if (err_name != name + "_err")
      throw io_error("invariant/error column mismatch: " + name + " vs " + err_name);
    record.invariant_names.push_back(name);
  }
  record.invariants.resize(n_inv);
  record.invariant_errors.resize(n_inv);

  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size())
      throw io_error("row has " + std::to_string(fields.size()) + " fields, expected " +
                     std::to_string(header.size()));
    record.step.push_back(parse_long(fields[0]));
    record.t.push_back(parse_double(fields[1]));
    Vec6 state;
    for (std::size_t i = 0; i < 6; ++i) state[i] = parse_double(fields[2 + i]);
    record.state.push_back(state);
    for (std::size_t k = 0; k < n_inv; ++k) {
      record.invariants[k].push_back(parse_double(fields[kFixed + k]));
      record.invariant_errors[k].push_back(parse_double(fields[kFixed + n_inv + k]));
    }
  }
  return record;
}

TrajectoryRecord read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open for reading: " + path);
  return read_csv(in);
}

}  // namespace cidg

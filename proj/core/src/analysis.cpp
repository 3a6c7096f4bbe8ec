#include "cidg/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cidg/errors.hpp"

namespace cidg {

DriftFit drift_fit(const TrajectoryRecord& record, std::string_view invariant,
                   bool absolute_error) {
  const std::size_t k = record.invariant_index(invariant);
  const std::vector<double>& errors = record.invariant_errors[k];
  const std::vector<double>& t = record.t;
  const long n = static_cast<long>(errors.size());
  if (n < 10) throw std::invalid_argument("drift_fit needs at least 10 samples");

  double t_mean = 0.0, e_mean = 0.0;
  for (long i = 0; i < n; ++i) {
    t_mean += t[i];
    e_mean += absolute_error ? std::abs(errors[i]) : errors[i];
  }
  t_mean /= n;
  e_mean /= n;

  double s_tt = 0.0, s_te = 0.0, s_ee = 0.0;
  for (long i = 0; i < n; ++i) {
    const double dt = t[i] - t_mean;
    const double de = (absolute_error ? std::abs(errors[i]) : errors[i]) - e_mean;
    s_tt += dt * dt;
    s_te += dt * de;
    s_ee += de * de;
  }

  DriftFit fit;
  fit.samples = n;
  if (s_ee == 0.0) {
    fit.degenerate = true;
    fit.intercept = e_mean;
    return fit;
  }
  fit.slope = s_te / s_tt;
  fit.intercept = e_mean - fit.slope * t_mean;
  fit.r_squared = (s_te * s_te) / (s_tt * s_ee);
  return fit;
}

namespace {

long integral_step_count(double t_end, double h) {
  const double ratio = t_end / h;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-6 * std::max(1.0, std::abs(ratio)))
    throw std::invalid_argument("t_end/h must be a positive integer (h = " + std::to_string(h) +
                                ")");
  return static_cast<long>(rounded);
}

}  // namespace

ConvergenceStudy convergence_study(ExperimentId experiment_id, Method method,
                                   std::vector<double> h_list, double t_end,
                                   const IntegratorConfig& solver) {
  if (h_list.empty()) throw std::invalid_argument("h_list must not be empty");
  for (double h : h_list)
    if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("h_list entries must be positive");
  if (!(t_end > 0.0)) throw std::invalid_argument("t_end must be positive");

  std::sort(h_list.begin(), h_list.end(), std::greater<>());
  std::vector<long> steps;
  steps.reserve(h_list.size());
  for (double h : h_list) steps.push_back(integral_step_count(t_end, h));

  const FieldModel& model = experiment(experiment_id);
  const PhasePoint z0 = experiment_defaults(experiment_id).initial;

  ConvergenceStudy study;
  const double h_ref = h_list.back() / 20.0;
  PhasePoint reference;
  try {
    IntegratorConfig cfg = solver;
    cfg.h = h_ref;
    reference = integrate(model, Method::rk4, z0, cfg, integral_step_count(t_end, h_ref));
  } catch (const solver_error& e) {
    study.completed = false;
    study.failure = e.what();
    study.failure_kind = run_error::Kind::solver;
    return study;
  } catch (const domain_error& e) {
    study.completed = false;
    study.failure = e.what();
    study.failure_kind = run_error::Kind::domain;
    return study;
  }

  double previous_h = 0.0, previous_error = 0.0;
  for (std::size_t i = 0; i < h_list.size(); ++i) {
    PhasePoint final_state;
    try {
      IntegratorConfig cfg = solver;
      cfg.h = h_list[i];
      final_state = integrate(model, method, z0, cfg, steps[i]);
    } catch (const solver_error& e) {
      study.completed = false;
      study.failed_h = h_list[i];
      study.failure = e.what();
      study.failure_kind = run_error::Kind::solver;
      return study;
    } catch (const domain_error& e) {
      study.completed = false;
      study.failed_h = h_list[i];
      study.failure = e.what();
      study.failure_kind = run_error::Kind::domain;
      return study;
    }

    Vec6 difference;
    for (std::size_t c = 0; c < 6; ++c) difference[c] = final_state[c] - reference[c];
    const double error = inf_norm(difference);

    double order = std::numeric_limits<double>::quiet_NaN();
    if (i > 0 && error > 0.0 && previous_error > 0.0)
      order = std::log(previous_error / error) / std::log(previous_h / h_list[i]);
    study.rows.push_back({h_list[i], error, order});
    previous_h = h_list[i];
    previous_error = error;
  }
  return study;
}

}  // namespace cidg

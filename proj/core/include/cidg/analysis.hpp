#ifndef CIDG_ANALYSIS_HPP
#define CIDG_ANALYSIS_HPP

#include <string>
#include <string_view>
#include <vector>

#include "cidg/trajectory.hpp"

namespace cidg {

//! Least-squares line through (t, invariant error).
struct DriftFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  long samples = 0;
  bool degenerate = false;  //!< constant series; slope forced to 0
};

//! Fits invariant error against t. Requires at least 10 samples. With
//! absolute_error set the fit runs on |error| instead (drift magnitude
//! regardless of sign).
DriftFit drift_fit(const TrajectoryRecord& record, std::string_view invariant,
                   bool absolute_error = false);

struct ConvergenceRow {
  double h;
  double global_error;    //!< inf-norm state difference at t_end vs the reference
  double observed_order;  //!< log(err_prev/err)/log(h_prev/h); NaN on the first row
};

//! Rows sorted by decreasing h; failure (if any) leaves the table partial.
struct ConvergenceStudy {
  std::vector<ConvergenceRow> rows;
  bool completed = true;
  double failed_h = 0.0;   //!< h of the failing run; 0 when the reference failed
  std::string failure;
  run_error::Kind failure_kind = run_error::Kind::solver;
};

//! Global-error convergence against an RK4 reference at min(h_list)/20.
//! t_end/h must be an integer for every h. solver.h is ignored; its
//! tolerances apply to every run.
ConvergenceStudy convergence_study(ExperimentId experiment, Method method,
                                   std::vector<double> h_list, double t_end,
                                   const IntegratorConfig& solver = {});

}  // namespace cidg

#endif  // CIDG_ANALYSIS_HPP

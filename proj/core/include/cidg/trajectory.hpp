#ifndef CIDG_TRAJECTORY_HPP
#define CIDG_TRAJECTORY_HPP

#include <array>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cidg/fields.hpp"
#include "cidg/integrators.hpp"
#include "cidg/phase.hpp"

namespace cidg {

//! Everything needed to reproduce one run. Identical specs produce
//! byte-identical CSV output.
struct RunSpec {
  std::string experiment;  //!< registry id: drift2d | energy-test | tokamak
  Method method = Method::cidgc;
  double h = 0.1;
  long steps = 1;
  long sample_every = 1;
  double fp_tol = 1e-14;
  int fp_max_iter = 200;
  double eta = kDefaultEta;
  PhasePoint initial{};
  std::string out_path;  //!< empty: caller decides where the CSV goes

  //! Spec defaults for an experiment; desk scale caps steps at 1e5 unless
  //! full_scale is set.
  static RunSpec defaults_for(ExperimentId id, bool full_scale = false);

  //! Throws std::invalid_argument on any malformed field.
  void validate() const;
};

//! Sampled time series of one run: state plus invariant values and their
//! errors against t = 0. Column-major; row r of invariant k lives at
//! invariants[k][r]. t is computed as step*h (one multiplication per row,
//! no accumulated addition).
struct TrajectoryRecord {
  std::vector<std::string> invariant_names;
  std::vector<long> step;
  std::vector<double> t;
  std::vector<Vec6> state;
  std::vector<std::vector<double>> invariants;
  std::vector<std::vector<double>> invariant_errors;

  //! Solver diagnostics; not serialized.
  int max_fp_iterations = 0;
  double wall_seconds = 0.0;

  std::size_t row_count() const { return step.size(); }
  std::size_t invariant_index(std::string_view name) const;  // throws if absent
};

//! A run that failed mid-trajectory. Whatever was recorded before the
//! failure has already been flushed to out_path (when set).
class run_error : public std::runtime_error {
 public:
  enum class Kind { solver, domain };

  run_error(Kind kind, long failed_step, const std::string& detail)
      : std::runtime_error("step " + std::to_string(failed_step) + ": " + detail),
        kind_(kind),
        failed_step_(failed_step) {}

  Kind kind() const { return kind_; }
  long failed_step() const { return failed_step_; }

 private:
  Kind kind_;
  long failed_step_;
};

//! Advances spec.steps steps, sampling every spec.sample_every-th state
//! (step 0 included). Writes the CSV to spec.out_path when non-empty.
//! On integrator failure flushes the partial record and throws run_error.
TrajectoryRecord run(const RunSpec& spec);

//! CSV: header step,t,x,y,z,v1,v2,v3,<inv>...,<inv>_err...; LF endings;
//! floats in shortest round-trip decimal.
void write_csv(const TrajectoryRecord& record, std::ostream& out);
void write_csv(const TrajectoryRecord& record, const std::string& path);
TrajectoryRecord read_csv(std::istream& in);
TrajectoryRecord read_csv(const std::string& path);

}  // namespace cidg

#endif  // CIDG_TRAJECTORY_HPP

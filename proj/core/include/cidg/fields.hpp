#ifndef CIDG_FIELDS_HPP
#define CIDG_FIELDS_HPP

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cidg/phase.hpp"

namespace cidg {

//! Positions closer than this to a potential/field singularity (R = 0 in
//! the drift2d and tokamak models) raise domain_error instead of returning
//! huge values.
inline constexpr double kSingularRadius = 1e-12;

enum class ExperimentId { drift2d, energy_test, tokamak };

//! Registry keys, exact and lowercase: "drift2d", "energy-test", "tokamak".
std::optional<ExperimentId> experiment_from_string(std::string_view id);
std::string_view to_string(ExperimentId id);
const std::vector<std::string_view>& experiment_ids();

//! 2D guiding-center drift problem: B = (0, 0, R), U = 1e-2 / R with
//! R = sqrt(x^2 + y^2). Invariants: H, angular momentum p_xi, magnetic
//! moment mu (adiabatic; bounded, not constant).
FieldModel make_drift2d();

//! Polynomial-potential energy behaviour test:
//! U = x^3 - y^3 + x^4/5 + y^4 + z^4, B = (0, 0, R). Invariant: H only.
FieldModel make_energy_test();

//! Axisymmetric tokamak field in Cartesian coordinates:
//! B = (-(2y+xz)/(2R^2), (2x-yz)/(2R^2), (R-1)/(2R)), U = 0.
//! Invariant: H = |v|^2 / 2.
FieldModel make_tokamak();

//! Shared immutable instance for a registry id; throws std::invalid_argument
//! for unknown ids.
const FieldModel& experiment(std::string_view id);
const FieldModel& experiment(ExperimentId id);

//! Evaluates every registered invariant at z, in registration order
//! ("H" first).
std::vector<std::pair<std::string, double>> evaluate_invariants(const FieldModel& model,
                                                                const PhasePoint& z);

//! Initial data and step size each experiment is run with by default.
struct ExperimentDefaults {
  PhasePoint initial;
  double h;
  long steps_full;  //!< full-scale step count; desk-scale runs cap at 1e5
};
ExperimentDefaults experiment_defaults(ExperimentId id);

//! Tokamak initial velocities for the two orbit classes.
inline constexpr Vec3 kTokamakTransitV0{0.0, 2.0 * 4.816e-4, 2.059e-3};
inline constexpr Vec3 kTokamakBananaV0{0.0, 4.816e-4, 2.059e-3};

}  // namespace cidg

#endif  // CIDG_FIELDS_HPP

#include "cidg/discrete_gradient.hpp"

#include <cmath>

#include "cidg/errors.hpp"

namespace cidg {

namespace {

// Increments below kSmallIncrement (relative) leave the plain H-difference
// quotient dominated by cancellation noise (~eps*|H|/increment), which both
// perturbs the dynamics and puts the fixed-point solvers' round-off floor
// above reachable tolerances. In that band the quotients are computed in
// cancellation-safe form instead: velocities admit the exact average (H is
// quadratic in v), positions use extended-precision U differences, and below
// kMidpointIncrement the analytic derivative at the increment midpoint
// (quotient error O(increment^2), far under any tolerance in play).
constexpr double kSmallIncrement = 5e-3;
constexpr double kMidpointIncrement = 1e-6;

double evaluate_mixed(const FieldModel& model, const PhasePoint& point, int coordinate) {
  try {
    return hamiltonian(model, point);
  } catch (const domain_error& e) {
    throw domain_error(std::string(e.what()) + " (discrete-gradient mixed point, coordinate " +
                           std::to_string(coordinate) + ")",
                       e.where(), coordinate);
  }
}

long double potential_xp_eval(const FieldModel& model, const Vec3& x) {
  if (model.potential_xp) return model.potential_xp(x);
  return static_cast<long double>(model.potential(x));
}

double grad_potential_component(const FieldModel& model, const Vec3& x, std::size_t i) {
  try {
    return model.grad_potential(x)[i];
  } catch (const domain_error& e) {
    throw domain_error(std::string(e.what()) + " (discrete-gradient fallback, coordinate " +
                           std::to_string(i) + ")",
                       e.where(), static_cast<int>(i));
  }
}

}  // namespace

DiscreteGradientResult discrete_gradient(const FieldModel& model, const PhasePoint& z_bar,
                                         const PhasePoint& z, double eta) {
  DiscreteGradientResult result;

  // Walk the 7 mixed points, flipping one coordinate of z to z_bar at a time.
  PhasePoint mixed = z;
  double h_prev = evaluate_mixed(model, mixed, 0);
  for (std::size_t i = 0; i < 6; ++i) {
    const double increment = z_bar[i] - z[i];
    const double scale = std::max({1.0, std::abs(z[i]), std::abs(z_bar[i])});

    if (std::abs(increment) <= eta * scale) {
      // Degenerate increment: exact partial derivative at the mixed point
      // that still carries the old i-th coordinate; contributes exactly 0
      // to the telescoping sum, as does the (near-)zero increment itself.
      result.degenerate_mask[i] = true;
      result.components[i] = i < 3 ? grad_potential_component(model, mixed.position(), i)
                                   : mixed[i];
      if (increment != 0.0) {
        mixed[i] = z_bar[i];
        h_prev = evaluate_mixed(model, mixed, static_cast<int>(i));
      }
      continue;
    }

    if (std::abs(increment) <= kSmallIncrement * scale) {
      if (i >= 3) {
        // H is quadratic in v: the difference quotient is exactly the mean.
        result.components[i] = 0.5 * (z_bar[i] + z[i]);
      } else if (std::abs(increment) <= kMidpointIncrement * scale) {
        PhasePoint midpoint = mixed;
        midpoint[i] = z[i] + 0.5 * increment;
        result.components[i] = grad_potential_component(model, midpoint.position(), i);
      } else {
        const Vec3 x_lo = mixed.position();
        Vec3 x_hi = x_lo;
        x_hi[i] = z_bar[i];
        try {
          const long double du = potential_xp_eval(model, x_hi) - potential_xp_eval(model, x_lo);
          result.components[i] =
              static_cast<double>(du / static_cast<long double>(increment));
        } catch (const domain_error& e) {
          throw domain_error(std::string(e.what()) +
                                 " (discrete-gradient mixed point, coordinate " +
                                 std::to_string(i) + ")",
                             e.where(), static_cast<int>(i));
        }
      }
      mixed[i] = z_bar[i];
      h_prev = evaluate_mixed(model, mixed, static_cast<int>(i));
      continue;
    }

    mixed[i] = z_bar[i];
    const double h_next = evaluate_mixed(model, mixed, static_cast<int>(i));
    result.components[i] = (h_next - h_prev) / increment;
    h_prev = h_next;
  }
  return result;
}

DiscreteGradientResult discrete_gradient_reversed(const FieldModel& model, const PhasePoint& z,
                                                  const PhasePoint& z_bar, double eta) {
  // The adjoint update reads the same one-coordinate walk with the state
  // roles exchanged: z occupies the slot the forward form gives to z_bar.
  return discrete_gradient(model, z, z_bar, eta);
}

}  // namespace cidg

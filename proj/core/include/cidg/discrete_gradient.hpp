#ifndef CIDG_DISCRETE_GRADIENT_HPP
#define CIDG_DISCRETE_GRADIENT_HPP

#include <array>

#include "cidg/phase.hpp"

namespace cidg {

//! Relative base for the degenerate-denominator threshold. The threshold
//! applied to coordinate i is eta * max(1, |z_i|, |z_bar_i|).
inline constexpr double kDefaultEta = 1e-12;

//! Coordinate-increment discrete gradient with its degeneracy bookkeeping.
//!
//! The defining identity, and the reason the CIDG steppers conserve H,
//! is the telescoping sum
//!     components . (z_bar - z) = H(z_bar) - H(z),
//! exact up to round-off: each component times its coordinate increment
//! reproduces one difference of H between consecutive mixed points, and
//! the mixed points walk from z to z_bar one coordinate at a time.
//! Coordinates with |z_bar_i - z_i| below the threshold contribute 0 to
//! both sides and take the partial-derivative fallback instead
//! (degenerate_mask[i] = true).
struct DiscreteGradientResult {
  Vec6 components{};
  std::array<bool, 6> degenerate_mask{};
};

//! Discrete gradient from z to z_bar: component i is the one-coordinate
//! difference quotient of H between mixed points
//!     (z_bar_1..z_bar_i, z_{i+1}..z_6)  and  (z_bar_1..z_bar_{i-1}, z_i..z_6),
//! or dH/dz_i at the lower mixed point when the increment is degenerate.
//! H is evaluated at the 7 mixed points only; the quotients share them.
//! Throws domain_error (with the coordinate index) if a mixed point is
//! outside the domain of H.
DiscreteGradientResult discrete_gradient(const FieldModel& model,
                                         const PhasePoint& z_bar,
                                         const PhasePoint& z,
                                         double eta = kDefaultEta);

//! Same quantity with the two states' roles exchanged, i.e. the gradient
//! read from z_bar back to z. The adjoint stepper consumes this form: its
//! update couples the new state through the second slot. Satisfies
//! components . (z - z_bar) = H(z) - H(z_bar).
DiscreteGradientResult discrete_gradient_reversed(const FieldModel& model,
                                                  const PhasePoint& z,
                                                  const PhasePoint& z_bar,
                                                  double eta = kDefaultEta);

}  // namespace cidg

#endif  // CIDG_DISCRETE_GRADIENT_HPP

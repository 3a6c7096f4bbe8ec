#ifndef CIDG_INTEGRATORS_HPP
#define CIDG_INTEGRATORS_HPP

#include <optional>
#include <string>
#include <string_view>

#include "cidg/discrete_gradient.hpp"
#include "cidg/phase.hpp"

namespace cidg {

struct IntegratorConfig {
  double h = 0.1;          //!< step size; may be negative, never zero
  double fp_tol = 1e-14;   //!< fixed-point update tolerance (inf-norm)
  int fp_max_iter = 200;
  double eta = kDefaultEta;

  //! Throws std::invalid_argument on h == 0, fp_tol <= 0, fp_max_iter < 1
  //! or eta <= 0.
  void validate() const;
};

struct StepOutcome {
  PhasePoint next;
  int fp_iterations = 0;   //!< map evaluations of the fixed-point solve (0 for explicit methods)
  double fp_residual = 0.0;
};

//! Energy-preserving implicit step: solves
//!     (z - z_n)/h = K((z + z_n)/2) . dg(z, z_n)
//! by Picard iteration warm-started with an explicit Euler guess. The
//! iteration runs past fp_tol while the update norm still shrinks, so each
//! accepted step sits at the round-off fixed point and H is conserved to
//! machine precision, not just to fp_tol.
StepOutcome cidg1_step(const FieldModel& model, const PhasePoint& z_n,
                       const IntegratorConfig& cfg);

//! Adjoint of cidg1_step: same equation with the discrete gradient read in
//! the reversed orientation, dg(z_n, z).
StepOutcome cidg2_step(const FieldModel& model, const PhasePoint& z_n,
                       const IntegratorConfig& cfg);

//! Symmetric composition: cidg2 over h/2 then cidg1 over h/2. Order 2.
//! fp_iterations is the sum over both halves; each half builds K at its
//! own midpoint.
StepOutcome cidgc_step(const FieldModel& model, const PhasePoint& z_n,
                       const IntegratorConfig& cfg);

//! Symmetric one-step Boris pusher with fields evaluated at the midpoint
//! position:
//!     x_h = x + (h/2) v;  v- = v + (h/2) E(x_h);  t = (h/2) B(x_h);
//!     v+ = v- + (v- + v- x t) x 2t/(1+|t|^2);
//!     v' = v+ + (h/2) E(x_h);  x' = x_h + (h/2) v'.
//! E = -grad U. Kinetic-energy-exact when E == 0; drifts in H otherwise.
StepOutcome boris_step(const FieldModel& model, const PhasePoint& z_n,
                       const IntegratorConfig& cfg);

//! Classical 4th-order Runge-Kutta on dz/dt = K(z) grad H(z); reference
//! integrator for convergence studies.
StepOutcome rk4_step(const FieldModel& model, const PhasePoint& z_n,
                     const IntegratorConfig& cfg);

enum class Method { cidg1, cidg2, cidgc, boris, rk4 };

std::optional<Method> method_from_string(std::string_view name);
std::string_view to_string(Method method);

StepOutcome advance(const FieldModel& model, Method method, const PhasePoint& z_n,
                    const IntegratorConfig& cfg);

//! Runs `steps` steps without recording; returns the final state and the
//! largest per-step fixed-point iteration count seen (0 for explicit
//! methods) through max_fp_iterations if non-null.
PhasePoint integrate(const FieldModel& model, Method method, PhasePoint z0,
                     const IntegratorConfig& cfg, long steps,
                     int* max_fp_iterations = nullptr);

}  // namespace cidg

#endif  // CIDG_INTEGRATORS_HPP

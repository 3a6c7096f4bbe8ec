#include "cidg/integrators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cidg/errors.hpp"

namespace cidg {

namespace {

PhasePoint midpoint(const PhasePoint& a, const PhasePoint& b) {
  PhasePoint m;
  for (std::size_t i = 0; i < 6; ++i) m[i] = 0.5 * (a[i] + b[i]);
  return m;
}

PhasePoint axpy(const PhasePoint& base, double scale, const Vec6& direction) {
  PhasePoint out;
  for (std::size_t i = 0; i < 6; ++i) out[i] = base[i] + scale * direction[i];
  return out;
}

void ensure_finite(const PhasePoint& z, const char* method) {
  if (!z.is_finite())
    throw domain_error(std::string(method) + ": non-finite state after step",
                       {z[0], z[1], z[2]});
}

//! Picard iteration z <- g(z) from an explicit-Euler warm start. Keeps
//! iterating past fp_tol while the update norm still shrinks, so the
//! accepted step sits at the round-off floor of the map; stops at the first
//! non-decrease once the tolerance has been met and returns the
//! lowest-update iterate seen (the floor can be a short cycle, not a single
//! point).
template <typename Map>
StepOutcome fixed_point_solve(const FieldModel& model, const PhasePoint& z_n,
                              const IntegratorConfig& cfg, Map&& g) {
  const Vec6 grad = grad_hamiltonian(model, z_n);
  const SkewMatrix6 k0 = build_skew(model, z_n.position());
  PhasePoint z = axpy(z_n, cfg.h, k0.apply(grad));

  PhasePoint best = z;
  double best_update = std::numeric_limits<double>::infinity();
  double previous_update = std::numeric_limits<double>::infinity();
  for (int iteration = 1; iteration <= cfg.fp_max_iter; ++iteration) {
    const PhasePoint z_next = g(z);
    if (!z_next.is_finite())
      throw solver_error("fixed-point iteration diverged to a non-finite state", iteration,
                         previous_update);
    const double update = inf_distance(z_next, z);
    if (update == 0.0) return {z_next, iteration, 0.0};
    if (update < best_update) {
      best_update = update;
      best = z_next;
    }
    if (update >= previous_update && best_update <= cfg.fp_tol)
      return {best, iteration, best_update};
    previous_update = update;
    z = z_next;
  }
  throw solver_error("fixed-point iteration did not converge to fp_tol", cfg.fp_max_iter,
                     std::min(best_update, previous_update));
}

StepOutcome implicit_dg_step(const FieldModel& model, const PhasePoint& z_n,
                             const IntegratorConfig& cfg, bool reversed) {
  cfg.validate();
  auto g = [&](const PhasePoint& z) {
    const SkewMatrix6 k = build_skew(model, midpoint(z, z_n).position());
    const DiscreteGradientResult dg = reversed
                                          ? discrete_gradient_reversed(model, z_n, z, cfg.eta)
                                          : discrete_gradient(model, z, z_n, cfg.eta);
    return axpy(z_n, cfg.h, k.apply(dg.components));
  };
  StepOutcome out = fixed_point_solve(model, z_n, cfg, g);
  ensure_finite(out.next, reversed ? "cidg2_step" : "cidg1_step");
  return out;
}

Vec6 phase_velocity(const FieldModel& model, const PhasePoint& z) {
  const SkewMatrix6 k = build_skew(model, z.position());
  return k.apply(grad_hamiltonian(model, z));
}

}  // namespace

void IntegratorConfig::validate() const {
  if (h == 0.0 || !std::isfinite(h)) throw std::invalid_argument("IntegratorConfig: h must be finite and non-zero");
  if (!(fp_tol > 0.0)) throw std::invalid_argument("IntegratorConfig: fp_tol must be positive");
  if (fp_max_iter < 1) throw std::invalid_argument("IntegratorConfig: fp_max_iter must be >= 1");
  if (!(eta > 0.0)) throw std::invalid_argument("IntegratorConfig: eta must be positive");
}

StepOutcome cidg1_step(const FieldModel& model, const PhasePoint& z_n,
                       const IntegratorConfig& cfg) {
  return implicit_dg_step(model, z_n, cfg, false);
}

StepOutcome cidg2_step(const FieldModel& model, const PhasePoint& z_n,
                       const IntegratorConfig& cfg) {
  return implicit_dg_step(model, z_n, cfg, true);
}

StepOutcome cidgc_step(const FieldModel& model, const PhasePoint& z_n,
                       const IntegratorConfig& cfg) {
  IntegratorConfig half = cfg;
  half.h = 0.5 * cfg.h;
  const StepOutcome first = cidg2_step(model, z_n, half);
  const StepOutcome second = cidg1_step(model, first.next, half);
  return {second.next, first.fp_iterations + second.fp_iterations,
          std::max(first.fp_residual, second.fp_residual)};
}

StepOutcome boris_step(const FieldModel& model, const PhasePoint& z_n,
                       const IntegratorConfig& cfg) {
  cfg.validate();
  const double half_h = 0.5 * cfg.h;

  const Vec3 x_half = z_n.position() + half_h * z_n.velocity();
  const Vec3 e = -model.grad_potential(x_half);
  const Vec3 b = model.b_field(x_half);
  if (!is_finite(e) || !is_finite(b))
    throw domain_error("boris_step: non-finite field at midpoint position",
                       {x_half.x, x_half.y, x_half.z});

  const Vec3 v_minus = z_n.velocity() + half_h * e;
  const Vec3 t = half_h * b;
  const Vec3 v_prime = v_minus + cross(v_minus, t);
  const Vec3 s = (2.0 / (1.0 + dot(t, t))) * t;
  const Vec3 v_plus = v_minus + cross(v_prime, s);
  const Vec3 v_new = v_plus + half_h * e;
  const Vec3 x_new = x_half + half_h * v_new;

  StepOutcome out{PhasePoint::from_parts(x_new, v_new), 0, 0.0};
  ensure_finite(out.next, "boris_step");
  return out;
}

StepOutcome rk4_step(const FieldModel& model, const PhasePoint& z_n,
                     const IntegratorConfig& cfg) {
  cfg.validate();
  const double h = cfg.h;
  const Vec6 k1 = phase_velocity(model, z_n);
  const Vec6 k2 = phase_velocity(model, axpy(z_n, 0.5 * h, k1));
  const Vec6 k3 = phase_velocity(model, axpy(z_n, 0.5 * h, k2));
  const Vec6 k4 = phase_velocity(model, axpy(z_n, h, k3));

  PhasePoint next = z_n;
  for (std::size_t i = 0; i < 6; ++i)
    next[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);

  StepOutcome out{next, 0, 0.0};
  ensure_finite(out.next, "rk4_step");
  return out;
}

std::optional<Method> method_from_string(std::string_view name) {
  if (name == "cidg1") return Method::cidg1;
  if (name == "cidg2") return Method::cidg2;
  if (name == "cidgc") return Method::cidgc;
  if (name == "boris") return Method::boris;
  if (name == "rk4") return Method::rk4;
  return std::nullopt;
}

std::string_view to_string(Method method) {
  switch (method) {
    case Method::cidg1: return "cidg1";
    case Method::cidg2: return "cidg2";
    case Method::cidgc: return "cidgc";
    case Method::boris: return "boris";
    case Method::rk4: return "rk4";
  }
  return "?";
}

StepOutcome advance(const FieldModel& model, Method method, const PhasePoint& z_n,
                    const IntegratorConfig& cfg) {
  switch (method) {
    case Method::cidg1: return cidg1_step(model, z_n, cfg);
    case Method::cidg2: return cidg2_step(model, z_n, cfg);
    case Method::cidgc: return cidgc_step(model, z_n, cfg);
    case Method::boris: return boris_step(model, z_n, cfg);
    case Method::rk4: return rk4_step(model, z_n, cfg);
  }
  throw std::invalid_argument("advance: unknown method");
}

PhasePoint integrate(const FieldModel& model, Method method, PhasePoint z0,
                     const IntegratorConfig& cfg, long steps, int* max_fp_iterations) {
  int worst = 0;
  for (long n = 0; n < steps; ++n) {
    const StepOutcome out = advance(model, method, z0, cfg);
    worst = std::max(worst, out.fp_iterations);
    z0 = out.next;
  }
  if (max_fp_iterations) *max_fp_iterations = worst;
  return z0;
}

}  // namespace cidg

#include "cidg/fields.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cidg/errors.hpp"

namespace cidg {

namespace {

double cylinder_radius(const Vec3& x) { return std::hypot(x.x, x.y); }

double checked_radius(const Vec3& x, const char* model) {
  const double r = cylinder_radius(x);
  if (r <= kSingularRadius)
    throw domain_error(std::string(model) + ": evaluation at R <= 1e-12 (axis singularity)",
                       {x.x, x.y, x.z});
  return r;
}

std::function<double(const PhasePoint&)> energy_evaluator(const FieldModel& model) {
  auto potential = model.potential;
  return [potential](const PhasePoint& z) {
    const Vec3 v = z.velocity();
    return 0.5 * dot(v, v) + potential(z.position());
  };
}

//! mu = v_perp^2 / (2|B|) with v_perp the component of v normal to B.
std::function<double(const PhasePoint&)> magnetic_moment_evaluator(const FieldModel& model) {
  auto b_field = model.b_field;
  return [b_field](const PhasePoint& z) {
    const Vec3 b = b_field(z.position());
    const double b_mag = norm(b);
    if (b_mag <= kSingularRadius)
      throw domain_error("magnetic moment undefined where B vanishes",
                         {z[0], z[1], z[2]});
    const Vec3 v = z.velocity();
    const double v_parallel = dot(v, b) / b_mag;
    const double v_perp_sq = dot(v, v) - v_parallel * v_parallel;
    return v_perp_sq / (2.0 * b_mag);
  };
}

}  // namespace

FieldModel make_drift2d() {
  FieldModel m;
  m.name = "drift2d";
  m.b_field = [](const Vec3& x) { return Vec3{0.0, 0.0, cylinder_radius(x)}; };
  m.potential = [](const Vec3& x) { return 1e-2 / checked_radius(x, "drift2d"); };
  m.potential_xp = [](const Vec3& x) {
    checked_radius(x, "drift2d");
    const long double lx = x.x, ly = x.y;
    return 1e-2L / sqrtl(lx * lx + ly * ly);
  };
  m.grad_potential = [](const Vec3& x) {
    const double r = checked_radius(x, "drift2d");
    const double scale = -1e-2 / (r * r * r);
    return Vec3{scale * x.x, scale * x.y, 0.0};
  };
  m.invariant_evaluators.emplace_back("H", energy_evaluator(m));
  // p_xi = R^2 dxi/dt + R^3/3 in cylinder coordinates; R^2 dxi/dt = x v2 - y v1.
  m.invariant_evaluators.emplace_back("p_xi", [](const PhasePoint& z) {
    const double r = cylinder_radius(z.position());
    return (z[0] * z[4] - z[1] * z[3]) + r * r * r / 3.0;
  });
  m.invariant_evaluators.emplace_back("mu", magnetic_moment_evaluator(m));
  return m;
}

FieldModel make_energy_test() {
  FieldModel m;
  m.name = "energy-test";
  m.b_field = [](const Vec3& x) { return Vec3{0.0, 0.0, cylinder_radius(x)}; };
  m.potential = [](const Vec3& x) {
    const double x2 = x.x * x.x, y2 = x.y * x.y, z2 = x.z * x.z;
    return x.x * x2 - x.y * y2 + 0.2 * x2 * x2 + y2 * y2 + z2 * z2;
  };
  m.potential_xp = [](const Vec3& x) {
    const long double lx = x.x, ly = x.y, lz = x.z;
    const long double x2 = lx * lx, y2 = ly * ly, z2 = lz * lz;
    return lx * x2 - ly * y2 + 0.2L * x2 * x2 + y2 * y2 + z2 * z2;
  };
  m.grad_potential = [](const Vec3& x) {
    return Vec3{3.0 * x.x * x.x + 0.8 * x.x * x.x * x.x,
                -3.0 * x.y * x.y + 4.0 * x.y * x.y * x.y,
                4.0 * x.z * x.z * x.z};
  };
  m.invariant_evaluators.emplace_back("H", energy_evaluator(m));
  return m;
}

FieldModel make_tokamak() {
  FieldModel m;
  m.name = "tokamak";
  m.b_field = [](const Vec3& x) {
    const double r = checked_radius(x, "tokamak");
    const double r2 = r * r;
    return Vec3{-(2.0 * x.y + x.x * x.z) / (2.0 * r2),
                (2.0 * x.x - x.y * x.z) / (2.0 * r2),
                (r - 1.0) / (2.0 * r)};
  };
  m.potential = [](const Vec3&) { return 0.0; };
  m.potential_xp = [](const Vec3&) { return 0.0L; };
  m.grad_potential = [](const Vec3&) { return Vec3{0.0, 0.0, 0.0}; };
  m.invariant_evaluators.emplace_back("H", energy_evaluator(m));
  return m;
}

std::optional<ExperimentId> experiment_from_string(std::string_view id) {
  if (id == "drift2d") return ExperimentId::drift2d;
  if (id == "energy-test") return ExperimentId::energy_test;
  if (id == "tokamak") return ExperimentId::tokamak;
  return std::nullopt;
}

std::string_view to_string(ExperimentId id) {
  switch (id) {
    case ExperimentId::drift2d: return "drift2d";
    case ExperimentId::energy_test: return "energy-test";
    case ExperimentId::tokamak: return "tokamak";
  }
  return "?";
}

const std::vector<std::string_view>& experiment_ids() {
  static const std::vector<std::string_view> ids{"drift2d", "energy-test", "tokamak"};
  return ids;
}

const FieldModel& experiment(ExperimentId id) {
  static const FieldModel drift2d = make_drift2d();
  static const FieldModel energy_test = make_energy_test();
  static const FieldModel tokamak = make_tokamak();
  switch (id) {
    case ExperimentId::drift2d: return drift2d;
    case ExperimentId::energy_test: return energy_test;
    case ExperimentId::tokamak: return tokamak;
  }
  throw std::invalid_argument("unknown experiment id");
}

const FieldModel& experiment(std::string_view id) {
  const auto parsed = experiment_from_string(id);
  if (!parsed) throw std::invalid_argument("unknown experiment id: " + std::string(id));
  return experiment(*parsed);
}

std::vector<std::pair<std::string, double>> evaluate_invariants(const FieldModel& model,
                                                                const PhasePoint& z) {
  std::vector<std::pair<std::string, double>> values;
  values.reserve(model.invariant_evaluators.size());
  for (const auto& [name, evaluate] : model.invariant_evaluators)
    values.emplace_back(name, evaluate(z));
  return values;
}

ExperimentDefaults experiment_defaults(ExperimentId id) {
  const double pi = std::numbers::pi;
  switch (id) {
    case ExperimentId::drift2d:
      return {PhasePoint::from_parts({0.0, 1.0, 0.0}, {0.1, 0.01, 0.0}), pi / 10.0, 500000};
    case ExperimentId::energy_test:
      return {PhasePoint::from_parts({0.0, 1.0, 0.1}, {0.09, 0.55, 0.3}), 1e-2, 3000000};
    case ExperimentId::tokamak:
      return {PhasePoint::from_parts({1.05, 0.0, 0.0}, kTokamakTransitV0), pi / 10.0, 500000};
  }
  throw std::invalid_argument("unknown experiment id");
}

}  // namespace cidg

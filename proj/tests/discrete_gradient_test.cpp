#include <doctest.h>

#include <cmath>

#include "cidg/discrete_gradient.hpp"
#include "cidg/errors.hpp"
#include "cidg/fields.hpp"
#include "test_util.hpp"

using namespace cidg;
using cidg::testing::StateSampler;
using cidg::testing::ulp_of;
using doctest::Approx;

namespace {

//! Telescoping defect |dg.(z_bar - z) - (H(z_bar) - H(z))|, accumulated in
//! long double so the measurement does not drown the quantity under test.
double telescoping_defect(const FieldModel& m, const PhasePoint& z_bar, const PhasePoint& z,
                          const DiscreteGradientResult& dg) {
  long double lhs = 0.0L;
  for (std::size_t i = 0; i < 6; ++i)
    lhs += static_cast<long double>(dg.components[i]) * (static_cast<long double>(z_bar[i]) - z[i]);
  const long double rhs =
      static_cast<long double>(hamiltonian(m, z_bar)) - static_cast<long double>(hamiltonian(m, z));
  return static_cast<double>(std::abs(lhs - rhs));
}

double energy_scale(const FieldModel& m, const PhasePoint& a, const PhasePoint& b) {
  return std::max(std::abs(hamiltonian(m, a)), std::abs(hamiltonian(m, b)));
}

}  // namespace

TEST_CASE("discrete gradient of a quadratic H averages the velocity endpoints") {
  const FieldModel m = cidg::testing::make_uniform_b({0.0, 0.0, 1.0});
  PhasePoint z = PhasePoint::from_parts({0.2, 0.3, 0.4}, {1.0, 0.0, 0.0});
  PhasePoint z_bar = z;
  z_bar[3] = 3.0;

  const DiscreteGradientResult dg = discrete_gradient(m, z_bar, z);
  CHECK(dg.components[3] == Approx(2.0));  // (9/2 - 1/2) / 2 = (v_bar + v)/2
  CHECK_FALSE(dg.degenerate_mask[3]);
  // coincident coordinates fall back to the exact partials
  CHECK(dg.components[4] == 0.0);
  CHECK(dg.components[5] == 0.0);
  CHECK(dg.degenerate_mask[4]);
  CHECK(dg.degenerate_mask[5]);
  CHECK(dg.degenerate_mask[0]);
}

TEST_CASE("discrete gradient at coincident states equals the gradient") {
  StateSampler sampler(21);
  for (auto id : {ExperimentId::drift2d, ExperimentId::energy_test, ExperimentId::tokamak}) {
    const FieldModel& m = experiment(id);
    for (int trial = 0; trial < 50; ++trial) {
      const PhasePoint z = sampler.for_model(id);
      const DiscreteGradientResult dg = discrete_gradient(m, z, z);
      const Vec6 grad = grad_hamiltonian(m, z);
      for (std::size_t i = 0; i < 6; ++i) {
        CHECK(dg.degenerate_mask[i]);
        CHECK(dg.components[i] == grad[i]);
      }
      const DiscreteGradientResult reversed = discrete_gradient_reversed(m, z, z);
      for (std::size_t i = 0; i < 6; ++i) CHECK(reversed.components[i] == grad[i]);
    }
  }
}

TEST_CASE("telescoping identity on the drift2d spec pair") {
  const FieldModel& m = experiment("drift2d");
  const PhasePoint z{{0.0, 1.0, 0.0, 0.1, 0.01, 0.0}};
  const PhasePoint z_bar{{0.05, 1.01, 0.0, 0.11, 0.02, 0.0}};
  const DiscreteGradientResult dg = discrete_gradient(m, z_bar, z);
  const double dh = std::abs(hamiltonian(m, z_bar) - hamiltonian(m, z));
  CHECK(telescoping_defect(m, z_bar, z, dg) <= 2.0 * ulp_of(dh));
}

TEST_CASE("telescoping identity holds to 4 ulp on random pairs, coincident coordinates included") {
  StateSampler sampler(22);
  for (auto id : {ExperimentId::drift2d, ExperimentId::energy_test, ExperimentId::tokamak}) {
    const FieldModel& m = experiment(id);
    for (int trial = 0; trial < 2000; ++trial) {
      const PhasePoint z = sampler.for_model(id);
      PhasePoint z_bar = sampler.for_model(id);
      if (trial % 3 == 0) {
        const int n_coincident = sampler.uniform_int(1, 6);
        for (int c = 0; c < n_coincident; ++c) {
          const int idx = sampler.uniform_int(0, 5);
          z_bar[idx] = z[idx];
        }
      }
      cidg::testing::snap_near_coincident(z_bar, z);
      const DiscreteGradientResult dg = discrete_gradient(m, z_bar, z);
      CHECK(telescoping_defect(m, z_bar, z, dg) <= 4.0 * ulp_of(energy_scale(m, z_bar, z)));
    }
  }
}

TEST_CASE("reversed gradient satisfies the mirrored telescoping identity") {
  StateSampler sampler(23);
  const FieldModel& m = experiment("energy-test");
  for (int trial = 0; trial < 500; ++trial) {
    PhasePoint z = sampler.energy_test();
    const PhasePoint z_bar = sampler.energy_test();
    cidg::testing::snap_near_coincident(z, z_bar);
    const DiscreteGradientResult dg = discrete_gradient_reversed(m, z, z_bar);
    // components . (z - z_bar) = H(z) - H(z_bar)
    CHECK(telescoping_defect(m, z, z_bar, dg) <= 4.0 * ulp_of(energy_scale(m, z, z_bar)));
  }
}

TEST_CASE("swapping arguments leaves quadratic velocity components unchanged") {
  const FieldModel m = cidg::testing::make_uniform_b({0.0, 0.0, 1.0});
  StateSampler sampler(24);
  for (int trial = 0; trial < 50; ++trial) {
    const PhasePoint a = sampler.drift2d();
    const PhasePoint b = sampler.drift2d();
    const DiscreteGradientResult forward = discrete_gradient(m, a, b);
    const DiscreteGradientResult swapped = discrete_gradient(m, b, a);
    for (std::size_t i = 3; i < 6; ++i)
      CHECK(forward.components[i] == Approx(swapped.components[i]).epsilon(1e-14));
  }
}

TEST_CASE("consistency: dg(z + delta*u, z) approaches grad H(z) at rate O(delta)") {
  StateSampler sampler(25);
  const FieldModel& m = experiment("energy-test");
  for (int trial = 0; trial < 20; ++trial) {
    const PhasePoint z = sampler.energy_test();
    Vec6 direction;
    double nrm = 0.0;
    for (auto& d : direction) {
      d = sampler.uniform(-1.0, 1.0);
      nrm += d * d;
    }
    nrm = std::sqrt(nrm);

    const Vec6 grad = grad_hamiltonian(m, z);
    double previous_error = std::numeric_limits<double>::infinity();
    for (double delta : {1e-2, 1e-3, 1e-4}) {
      PhasePoint z_bar = z;
      for (std::size_t i = 0; i < 6; ++i) z_bar[i] += delta * direction[i] / nrm;
      const DiscreteGradientResult dg = discrete_gradient(m, z_bar, z);
      double error = 0.0;
      for (std::size_t i = 0; i < 6; ++i)
        error = std::max(error, std::abs(dg.components[i] - grad[i]));
      CHECK(error <= 20.0 * delta);  // O(delta) with a generous constant
      CHECK(error <= 0.5 * previous_error);
      previous_error = error;
    }
  }
}

TEST_CASE("degenerate mask fires exactly at the threshold") {
  const FieldModel& m = experiment("energy-test");
  const double eta = 1e-8;
  PhasePoint z = PhasePoint::from_parts({1.0, -1.0, 0.5}, {0.3, 0.4, 0.5});

  PhasePoint above = z;
  above[1] += 2e-8;  // |increment| > eta (coords here have |z_i| <= 1 so threshold = eta)
  CHECK_FALSE(discrete_gradient(m, above, z, eta).degenerate_mask[1]);

  PhasePoint below = z;
  below[1] += 0.5e-8;
  CHECK(discrete_gradient(m, below, z, eta).degenerate_mask[1]);

  PhasePoint exact = z;
  CHECK(discrete_gradient(m, exact, z, eta).degenerate_mask[1]);
}

TEST_CASE("fallback continuity: no jump as an increment crosses eta") {
  const FieldModel& m = experiment("energy-test");
  const double eta = 1e-8;
  StateSampler sampler(26);
  for (int trial = 0; trial < 20; ++trial) {
    const PhasePoint z = sampler.energy_test();
    for (std::size_t i = 0; i < 6; ++i) {
      // the threshold is relative: eta * max(1, |z_i|, |z_bar_i|)
      const double scale = std::max(1.0, std::abs(z[i]));
      PhasePoint above = z, below = z;
      above[i] = z[i] + scale * eta * (1.0 + 1e-3);
      below[i] = z[i] + scale * eta * (1.0 - 1e-3);
      const DiscreteGradientResult dg_above = discrete_gradient(m, above, z, eta);
      const DiscreteGradientResult dg_below = discrete_gradient(m, below, z, eta);
      CHECK_FALSE(dg_above.degenerate_mask[i]);
      CHECK(dg_below.degenerate_mask[i]);
      CHECK(std::abs(dg_above.components[i] - dg_below.components[i]) <= 100.0 * eta);
    }
  }
}

TEST_CASE("small increments get cancellation-safe quotients") {
  // In the band between the degenerate threshold and ~5e-3 the plain
  // double H-difference quotient would carry noise ~eps*|H|/increment;
  // the components must instead track the true quotient closely.
  const FieldModel& m = experiment("energy-test");
  StateSampler sampler(27);
  for (int trial = 0; trial < 20; ++trial) {
    const PhasePoint z = sampler.energy_test();
    const Vec6 grad = grad_hamiltonian(m, z);
    for (double delta : {1e-4, 1e-7}) {
      for (std::size_t i = 0; i < 6; ++i) {
        PhasePoint z_bar = z;
        z_bar[i] = z[i] + delta;
        const DiscreteGradientResult dg = discrete_gradient(m, z_bar, z);
        CHECK_FALSE(dg.degenerate_mask[i]);
        // true quotient = dH/dz_i at the increment midpoint + O(delta^2)
        PhasePoint midpoint = z;
        midpoint[i] = z[i] + 0.5 * delta;
        const double expected = grad_hamiltonian(m, midpoint)[i];
        CHECK(dg.components[i] == Approx(expected).epsilon(1e-8).scale(1.0));
        // noise floor: far below the double-cancellation level eps*|H|/delta
        const double double_noise = 2.2e-16 * std::abs(hamiltonian(m, z)) / delta;
        if (delta <= 1e-6)
          CHECK(std::abs(dg.components[i] - expected) <= 1e-3 * double_noise + 1e-12);
      }
    }
    (void)grad;
  }
}

TEST_CASE("singular mixed point raises domain_error with the coordinate index") {
  const FieldModel& m = experiment("drift2d");
  // Flipping x first sends the mixed point (x_bar, y, .) onto the axis.
  const PhasePoint z = PhasePoint::from_parts({0.5, 0.0, 0.0}, {0.1, 0.0, 0.0});
  PhasePoint z_bar = z;
  z_bar[0] = 0.0;
  z_bar[1] = 0.5;
  try {
    discrete_gradient(m, z_bar, z);
    FAIL("expected domain_error");
  } catch (const domain_error& e) {
    CHECK(e.coordinate() == 0);
  }
}

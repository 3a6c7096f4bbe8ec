#ifndef CIDG_PHASE_HPP
#define CIDG_PHASE_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace cidg {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  double& operator[](std::size_t i) { return i == 0 ? x : (i == 1 ? y : z); }
  double operator[](std::size_t i) const { return i == 0 ? x : (i == 1 ? y : z); }
};

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a.x, s * a.y, s * a.z}; }
inline Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline bool is_finite(const Vec3& a) {
  return std::isfinite(a.x) && std::isfinite(a.y) && std::isfinite(a.z);
}

using Vec6 = std::array<double, 6>;

//! Phase-space state z = (x, y, z, v1, v2, v3) in normalized units.
struct PhasePoint {
  Vec6 coords{};

  static PhasePoint from_parts(const Vec3& position, const Vec3& velocity) {
    return {{position.x, position.y, position.z, velocity.x, velocity.y, velocity.z}};
  }

  Vec3 position() const { return {coords[0], coords[1], coords[2]}; }
  Vec3 velocity() const { return {coords[3], coords[4], coords[5]}; }

  double& operator[](std::size_t i) { return coords[i]; }
  double operator[](std::size_t i) const { return coords[i]; }

  bool is_finite() const {
    for (double c : coords)
      if (!std::isfinite(c)) return false;
    return true;
  }
};

inline bool operator==(const PhasePoint& a, const PhasePoint& b) { return a.coords == b.coords; }

inline double inf_norm(const Vec6& a) {
  double m = 0.0;
  for (double c : a) m = std::max(m, std::abs(c));
  return m;
}

inline double inf_distance(const PhasePoint& a, const PhasePoint& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < 6; ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

//! Dense 6x6 structure matrix K(z); K = -K^T exactly by construction.
//! Block layout: [[0, I], [-I, S(x)]] with S assembled from B(x).
struct SkewMatrix6 {
  std::array<std::array<double, 6>, 6> m{};

  Vec6 apply(const Vec6& g) const {
    Vec6 out{};
    for (std::size_t i = 0; i < 6; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < 6; ++j) acc += m[i][j] * g[j];
      out[i] = acc;
    }
    return out;
  }
};

//! A problem definition: magnetic field, electrostatic potential with its
//! analytic gradient, and the named invariants tracked along trajectories.
//! Immutable after construction; all evaluators are pure.
struct FieldModel {
  std::string name;
  std::function<Vec3(const Vec3&)> b_field;
  std::function<double(const Vec3&)> potential;
  std::function<Vec3(const Vec3&)> grad_potential;
  //! Optional extended-precision potential. The discrete gradient uses it
  //! for difference quotients across small coordinate increments, where
  //! double-precision U differences are cancellation noise; without it the
  //! implicit solvers may stall above fp_tol near velocity turning points.
  std::function<long double(const Vec3&)> potential_xp;
  //! Ordered list; always starts with "H".
  std::vector<std::pair<std::string, std::function<double(const PhasePoint&)>>>
      invariant_evaluators;
};

//! Assembles K at position x: S12 = B3, S13 = -B2, S23 = B1,
//! antisymmetric completion. Throws domain_error if B(x) is non-finite.
SkewMatrix6 build_skew(const FieldModel& model, const Vec3& x);

//! H(z) = v.v/2 + U(x).
double hamiltonian(const FieldModel& model, const PhasePoint& z);

//! (grad U(x), v) stacked.
Vec6 grad_hamiltonian(const FieldModel& model, const PhasePoint& z);

}  // namespace cidg

#endif  // CIDG_PHASE_HPP

#include "cidg/phase.hpp"

#include "cidg/errors.hpp"

namespace cidg {

SkewMatrix6 build_skew(const FieldModel& model, const Vec3& x) {
  if (!is_finite(x)) throw domain_error("build_skew: non-finite position", {x.x, x.y, x.z});
  const Vec3 b = model.b_field(x);
  if (!is_finite(b))
    throw domain_error("build_skew: non-finite B(x)", {x.x, x.y, x.z});

  SkewMatrix6 k;
  for (std::size_t i = 0; i < 3; ++i) {
    k.m[i][3 + i] = 1.0;
    k.m[3 + i][i] = -1.0;
  }
  // S(x): S12 = B3, S13 = -B2, S23 = B1, each entry paired with its negation.
  k.m[3][4] = b.z;
  k.m[4][3] = -b.z;
  k.m[3][5] = -b.y;
  k.m[5][3] = b.y;
  k.m[4][5] = b.x;
  k.m[5][4] = -b.x;
  return k;
}

double hamiltonian(const FieldModel& model, const PhasePoint& z) {
  const Vec3 v = z.velocity();
  return 0.5 * dot(v, v) + model.potential(z.position());
}

Vec6 grad_hamiltonian(const FieldModel& model, const PhasePoint& z) {
  const Vec3 gu = model.grad_potential(z.position());
  return {gu.x, gu.y, gu.z, z[3], z[4], z[5]};
}

}  // namespace cidg

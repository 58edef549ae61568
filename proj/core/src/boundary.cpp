#include "memsfield/boundary.hpp"

namespace memsfield {

ZetaEval eval_zeta(const LiftSpec& spec, double r) {
  const double d2 = spec.d * spec.d;
  if (r <= 1.0) return {0.0, 0.0, 0.0};
  if (r < 1.0 + spec.d) {
    const double t = r - 1.0;
    return {spec.V * t * t / d2, 2.0 * spec.V * t / d2, 2.0 * spec.V / d2};
  }
  if (r == 1.0 + spec.d) {
    // left-sided derivatives at the top kink
    return {spec.V, 2.0 * spec.V / spec.d, 2.0 * spec.V / d2};
  }
  return {spec.V, 0.0, 0.0};
}

double eval_h(const LiftSpec& spec, const Profile& profile, double x,
              double z) {
  return eval_zeta(spec, z - profile.u_at(x) + 1.0).value;
}

Grad2 grad_h(const LiftSpec& spec, const Profile& profile, double x,
             double z) {
  const ZetaEval ze = eval_zeta(spec, z - profile.u_at(x) + 1.0);
  return {-profile.du_at(x) * ze.d1, ze.d1};
}

}  // namespace memsfield

#pragma once

#include "memsfield/geometry.hpp"

namespace memsfield {

/// The concrete Dirichlet lift h_v(x,z) = zeta(z - u(x) + 1) with the
/// quadratic ramp zeta(r) = V min{1, (r-1)^2/d^2} for r > 1 and zeta = 0 for
/// r <= 1. It vanishes on the lower layer, equals V on and above the top
/// boundary, and is C^1 with one-sided second derivatives at the kinks.
struct LiftSpec {
  double V = 1.0;
  double d = 1.0;

  static LiftSpec from(const PhysicalParams& p) { return {p.V, p.d}; }
};

struct ZetaEval {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

/// Value and one-sided derivatives of the ramp; at the kinks r = 1 and
/// r = 1+d the left-sided derivatives are returned.
ZetaEval eval_zeta(const LiftSpec& spec, double r);

double eval_h(const LiftSpec& spec, const Profile& profile, double x, double z);

struct Grad2 {
  double dx = 0.0;
  double dz = 0.0;
};

/// Analytic gradient of h: (-u'(x) zeta', zeta').
Grad2 grad_h(const LiftSpec& spec, const Profile& profile, double x, double z);

}  // namespace memsfield

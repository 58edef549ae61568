#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "memsfield/geometry.hpp"

using namespace memsfield;

namespace {
const double pi = std::numbers::pi;

PhysicalParams base_params() { return {}; }  // L=H=d=V=1, sigma 1/2
}  // namespace

TEST_CASE("params validation") {
  PhysicalParams p = base_params();
  CHECK_NOTHROW(p.validate());
  p.H = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = base_params();
  p.sigma1 = -1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = base_params();
  p.sigma1 = p.sigma2;
  CHECK(p.degenerate_sigma());
  CHECK_NOTHROW(p.validate());
  CHECK(base_params().sigma_jump() == -1.0);
}

TEST_CASE("builtin profiles evaluate their closed forms") {
  const PhysicalParams p = base_params();
  const Profile flat = Profile::builtin(p, "flat", 32);
  for (double v : flat.u) CHECK(v == 0.0);

  const Profile par = Profile::builtin(p, "parabola_touch", 64);
  CHECK(par.u_at(0.0) == doctest::Approx(-1.0));
  CHECK(par.u[0] == 0.0);
  CHECK(par.du_at(0.5) == doctest::Approx(1.0));
  CHECK(par.d2u_at(0.3) == doctest::Approx(2.0));

  const Profile cos5 = Profile::builtin(p, "cosine(-0.5)", 64);
  CHECK(cos5.u_at(0.0) == doctest::Approx(-0.5));
  CHECK(cos5.du_at(0.0) == doctest::Approx(0.0).epsilon(1e-12));

  const Profile bump = Profile::builtin(p, "bump(0.3)", 128);
  CHECK(bump.u_at(0.0) == doctest::Approx(-0.3));
  CHECK(bump.u_at(0.75) == 0.0);  // compact support
  CHECK(bump.du_at(0.75) == 0.0);

  CHECK_THROWS_AS(Profile::builtin(p, "sawtooth", 32), std::invalid_argument);
}

TEST_CASE("from_samples rejects bad data and clamps grazing samples") {
  const PhysicalParams p = base_params();
  std::vector<double> x = {-1.0, -0.5, 0.0, 0.5, 1.0};

  CHECK_THROWS_AS(
      Profile::from_samples(p, x, {0.0, -0.1, -0.2, 0.1, 0.5}),  // u(L) != 0
      std::invalid_argument);
  CHECK_THROWS_AS(
      Profile::from_samples(p, x, {0.0, -0.1, -1.5, -0.1, 0.0}),  // u < -H
      std::invalid_argument);
  CHECK_THROWS_AS(Profile::from_samples(p, {-1.0, 0.0, 1.0}, {0.0, -0.1, 0.0}),
                  std::invalid_argument);  // too few samples
  CHECK_THROWS_AS(Profile::from_samples(p, {-1.0, -0.4, 0.0, 0.5, 1.0},
                                        {0.0, -0.1, -0.2, -0.1, 0.0}),
                  std::invalid_argument);  // non-uniform x

  // A sample a hair below -H gets clamped onto the plate.
  Profile prof =
      Profile::from_samples(p, x, {0.0, -0.5, -1.0 - 1e-12, -0.5, 0.0});
  CHECK(prof.u[2] == -1.0);
}

TEST_CASE("finite-difference derivatives are exact on quadratics") {
  const PhysicalParams p = base_params();
  std::vector<double> x, u;
  const int n = 16;
  for (int i = 0; i <= n; ++i) {
    const double xi = -1.0 + 2.0 * i / n;
    x.push_back(xi);
    u.push_back(0.5 * (xi * xi - 1.0));  // u' = x, u'' = 1
  }
  const Profile prof = Profile::from_samples(p, x, u);
  for (int i = 0; i <= n; ++i) {
    CHECK(prof.du[i] == doctest::Approx(x[i]).epsilon(1e-12));
    CHECK(prof.d2u[i] == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("classification of the built-in family") {
  const PhysicalParams p = base_params();  // sigma jump = -1

  CHECK(classify(Profile::builtin(p, "flat", 64)).cls ==
        AdmissClass::InteriorS);
  CHECK(classify(Profile::builtin(p, "cosine(-0.5)", 64)).cls ==
        AdmissClass::InteriorS);
  CHECK(classify(Profile::builtin(p, "bump(0.3)", 64)).cls ==
        AdmissClass::InteriorS);

  const Admissibility par =
      classify(Profile::builtin(p, "parabola_touch", 64));
  CHECK(par.cls == AdmissClass::BarSOnly);
  REQUIRE(par.coincidence.size() == 1);
  CHECK(par.coincidence[0].begin == 32);  // the single node at x = 0
  CHECK(par.coincidence[0].end == 32);

  // Swapping the permittivities flips the endpoint sign condition: the
  // parabola has u'(L) > 0, so jump > 0 makes it inadmissible.
  PhysicalParams swapped = p;
  swapped.sigma1 = 2.0;
  swapped.sigma2 = 1.0;
  const Admissibility bad =
      classify(Profile::builtin(swapped, "parabola_touch", 64));
  CHECK(bad.cls == AdmissClass::Inadmissible);
  CHECK(bad.reasons.size() == 2);

  // Degenerate sigma: the jump vanishes, every slope passes.
  PhysicalParams degen = p;
  degen.sigma2 = 1.0;
  CHECK(classify(Profile::builtin(degen, "parabola_touch", 64)).cls ==
        AdmissClass::BarSOnly);
}

TEST_CASE("classification is refinement invariant") {
  const PhysicalParams p = base_params();
  for (const char* name : {"flat", "cosine(-0.5)", "parabola_touch",
                           "bump(0.3)"}) {
    const auto c64 = classify(Profile::builtin(p, name, 64)).cls;
    const auto c512 = classify(Profile::builtin(p, name, 512)).cls;
    CHECK(c64 == c512);
  }
}

TEST_CASE("profile norms against closed forms") {
  const PhysicalParams p = base_params();

  // parabola_touch: u = x^2 - 1, so int u^2 = 16/15, int u'^2 = 8/3,
  // int u''^2 = 8.
  const ProfileNorms n = profile_norms(Profile::builtin(p, "parabola_touch", 1024));
  CHECK(n.l_inf == doctest::Approx(1.0));
  CHECK(n.h1 == doctest::Approx(std::sqrt(16.0 / 15.0 + 8.0 / 3.0)).epsilon(1e-5));
  CHECK(n.h2 ==
        doctest::Approx(std::sqrt(16.0 / 15.0 + 8.0 / 3.0 + 8.0)).epsilon(1e-5));

  // cosine(a): int u^2 = a^2, int u'^2 = a^2 pi^2/4, int u''^2 = a^2 pi^4/16.
  const double a = -0.5;
  const ProfileNorms c = profile_norms(Profile::builtin(p, "cosine(-0.5)", 1024));
  CHECK(c.l_inf == doctest::Approx(0.5));
  CHECK(c.h1 ==
        doctest::Approx(std::sqrt(a * a * (1.0 + pi * pi / 4.0))).epsilon(1e-5));
  CHECK(c.h2 == doctest::Approx(std::sqrt(
                    a * a * (1.0 + pi * pi / 4.0 + pi * pi * pi * pi / 16.0)))
                    .epsilon(1e-5));
}

TEST_CASE("domain summary") {
  const PhysicalParams p = base_params();

  // parabola: |Omega_1| = int (u + H) = int x^2 = 2/3.
  const DomainSummary sp =
      build_domain_summary(Profile::builtin(p, "parabola_touch", 1024));
  CHECK(sp.area1 == doctest::Approx(2.0 / 3.0).epsilon(1e-5));
  CHECK(sp.area2 == doctest::Approx(2.0));
  CHECK(sp.M == doctest::Approx(2.0));

  // cosine(-0.5): int u = -(4/pi) * 0.5, so area1 = 2 - 2/pi.
  const DomainSummary sc =
      build_domain_summary(Profile::builtin(p, "cosine(-0.5)", 1024));
  CHECK(sc.area1 == doctest::Approx(2.0 - 2.0 / pi).epsilon(1e-5));
  CHECK(sc.M == doctest::Approx(1.5));
  CHECK(sc.arclength >= 2.0);

  const DomainSummary sf = build_domain_summary(Profile::builtin(p, "flat", 64));
  CHECK(sf.area1 == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(sf.arclength == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("terrain transforms round-trip") {
  const PhysicalParams p = base_params();
  const Profile prof = Profile::builtin(p, "cosine(-0.5)", 256);
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> ux(-1.0, 1.0);
  std::uniform_real_distribution<double> ueta(0.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    const double x = ux(rng);
    const double eta1 = ueta(rng);
    const Point2 z1 = map_T1_inv(prof, x, eta1);
    const Point2 back1 = map_T1(prof, z1.x, z1.y);
    CHECK(back1.y == doctest::Approx(eta1).epsilon(1e-12));
    CHECK(z1.y >= -1.0);
    CHECK(z1.y <= prof.u_at(x) + 1e-12);

    const double eta2 = 1.0 + ueta(rng);  // d = 1
    const Point2 z2 = map_T2_inv(prof, x, eta2);
    const Point2 back2 = map_T2(prof, z2.x, z2.y);
    CHECK(back2.y == doctest::Approx(eta2).epsilon(1e-12));
  }

  // T1 refuses a collapsed column.
  const Profile par = Profile::builtin(p, "parabola_touch", 64);
  CHECK_THROWS_AS(map_T1(par, 0.0, -0.5), std::domain_error);
  CHECK_NOTHROW(map_T1(par, 0.5, -0.5));
}

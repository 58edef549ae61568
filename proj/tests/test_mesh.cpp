#include <doctest.h>

#include <cmath>

#include "memsfield/mesh.hpp"

using namespace memsfield;

TEST_CASE("flat mesh layout, tags and spacing") {
  const PhysicalParams p{};
  const Profile prof = Profile::builtin(p, "flat", 4);
  const LayeredMesh m = build_mesh(prof, 2, 2);

  CHECK(m.rows() == 5);
  CHECK(m.num_nodes() == 25);
  CHECK(m.num_cells() == 16);

  // Column 1 (x = -0.5): z rows are -1, -0.5, 0, 0.5, 1.
  const double want[5] = {-1.0, -0.5, 0.0, 0.5, 1.0};
  for (int j = 0; j < 5; ++j)
    CHECK(m.zs[m.node(1, j)] == doctest::Approx(want[j]).epsilon(1e-14));

  CHECK(m.tags[m.node(1, 0)] == NodeTag::Bottom);
  CHECK(m.tags[m.node(1, 1)] == NodeTag::Interior);
  CHECK(m.tags[m.node(1, 2)] == NodeTag::Interface);
  CHECK(m.tags[m.node(1, 4)] == NodeTag::Top);
  CHECK(m.tags[m.node(0, 1)] == NodeTag::Side);
  CHECK(m.tags[m.node(0, 0)] == NodeTag::Bottom);   // corner: boundary wins
  CHECK(m.tags[m.node(0, 2)] == NodeTag::Interface);
  CHECK(m.tags[m.node(4, 3)] == NodeTag::Side);

  CHECK(m.is_dirichlet(m.node(1, 0)));
  CHECK(m.is_dirichlet(m.node(1, 4)));
  CHECK_FALSE(m.is_dirichlet(m.node(0, 1)));  // side walls stay free
  CHECK_FALSE(m.is_dirichlet(m.node(1, 2)));

  CHECK(m.cell_layer(0) == Layer::Lower);
  CHECK(m.cell_layer(2) == Layer::Upper);
  CHECK(m.cell_sigma(0) == 1.0);
  CHECK(m.cell_sigma(3) == 2.0);

  for (char a : m.active) CHECK(a == 1);
  for (char c : m.collapsed) CHECK(c == 0);

  CHECK_THROWS_AS(build_mesh(prof, 0, 2), std::invalid_argument);
}

TEST_CASE("terrain-following interface row") {
  const PhysicalParams p{};
  const Profile prof = Profile::builtin(p, "cosine(-0.5)", 16);
  const LayeredMesh m = build_mesh(prof, 4, 4);
  for (int i = 0; i <= m.Nx; ++i) {
    CHECK(m.zs[m.node(i, m.N1)] == doctest::Approx(prof.u[i]).epsilon(1e-14));
    CHECK(m.zs[m.node(i, 0)] == -1.0);
    CHECK(m.zs[m.node(i, m.rows() - 1)] ==
          doctest::Approx(prof.u[i] + p.d).epsilon(1e-14));
    // equispaced within each layer
    const double h1 = m.zs[m.node(i, 1)] - m.zs[m.node(i, 0)];
    CHECK(m.zs[m.node(i, 3)] - m.zs[m.node(i, 2)] ==
          doctest::Approx(h1).epsilon(1e-12));
  }
}

TEST_CASE("touching profile collapses the central column") {
  const PhysicalParams p{};
  const Profile prof = Profile::builtin(p, "parabola_touch", 8);
  const LayeredMesh m = build_mesh(prof, 4, 4);

  CHECK(m.collapsed[4] == 1);
  for (int i = 0; i <= 8; ++i)
    if (i != 4) CHECK(m.collapsed[i] == 0);

  // All lower nodes of the collapsed column sit on the plate as boundary.
  for (int j = 0; j <= m.N1; ++j) {
    CHECK(m.zs[m.node(4, j)] == -1.0);
    CHECK(m.tags[m.node(4, j)] == NodeTag::Bottom);
  }
  CHECK(m.tags[m.node(4, m.N1 + 1)] == NodeTag::Interior);

  // A single collapsed column leaves wedge cells active on both sides,
  // and their quadrature is well defined.
  for (char a : m.active) CHECK(a == 1);
  CHECK_NOTHROW(element_quadrature(m, 3, 0));
  CHECK_NOTHROW(element_quadrature(m, 4, 0));

  // Total active area equals |Omega_1| + |Omega_2| = 2/3 + 2 up to the
  // polygonal (trapezoid) approximation of the parabola.
  const DomainSummary s = build_domain_summary(prof);
  CHECK(m.area_active() == doctest::Approx(s.area1 + s.area2).epsilon(1e-12));
}

TEST_CASE("adjacent collapsed columns deactivate zero-area cells") {
  const PhysicalParams p{};
  // Piecewise profile touching on a plateau [-0.25, 0.25].
  std::vector<double> x, u;
  const int n = 8;
  for (int i = 0; i <= n; ++i) {
    const double xi = -1.0 + 2.0 * i / n;
    x.push_back(xi);
    const double a = std::abs(xi);
    u.push_back(a <= 0.25 ? -1.0 : -1.0 + (a - 0.25) / 0.75);
  }
  const Profile prof = Profile::from_samples(p, x, u);
  const LayeredMesh m = build_mesh(prof, 3, 3);

  CHECK(m.collapsed[3] == 1);
  CHECK(m.collapsed[4] == 1);
  CHECK(m.collapsed[5] == 1);
  for (int cj = 0; cj < m.N1; ++cj) {
    CHECK(m.active[m.cell(3, cj)] == 0);
    CHECK(m.active[m.cell(4, cj)] == 0);
    CHECK(m.active[m.cell(2, cj)] == 1);  // wedge next to the plateau
  }
  for (int ci = 0; ci < m.Nx; ++ci)
    for (int cj = m.N1; cj < m.N1 + m.N2; ++cj)
      CHECK(m.active[m.cell(ci, cj)] == 1);

  // Quadrature on active cells only; area consistency still holds.
  double area_q = 0.0;
  for (int ci = 0; ci < m.Nx; ++ci)
    for (int cj = 0; cj < m.N1 + m.N2; ++cj) {
      if (!m.active[m.cell(ci, cj)]) continue;
      for (const QuadPoint& qp : element_quadrature(m, ci, cj)) area_q += qp.w;
    }
  CHECK(area_q == doctest::Approx(m.area_active()).epsilon(1e-12));
}

TEST_CASE("quadrature weights sum to the cell area") {
  const PhysicalParams p{};
  const Profile prof = Profile::builtin(p, "flat", 4);
  const LayeredMesh m = build_mesh(prof, 2, 2);
  // Flat cells are 0.5 x 0.5 rectangles.
  for (int ci = 0; ci < 4; ++ci)
    for (int cj = 0; cj < 4; ++cj) {
      double s = 0.0;
      for (const QuadPoint& qp : element_quadrature(m, ci, cj)) s += qp.w;
      CHECK(s == doctest::Approx(0.25).epsilon(1e-14));
    }
}

TEST_CASE("patch test: bilinear gradient is exact for linear fields") {
  const PhysicalParams p{};
  const Profile prof = Profile::builtin(p, "cosine(-0.5)", 12);
  const LayeredMesh m = build_mesh(prof, 5, 3);
  std::vector<double> f(m.num_nodes());
  for (int i = 0; i <= m.Nx; ++i)
    for (int j = 0; j < m.rows(); ++j)
      f[m.node(i, j)] = 2.0 + 3.0 * m.xs[i] - m.zs[m.node(i, j)];

  for (int ci = 0; ci < m.Nx; ++ci)
    for (int cj = 0; cj < m.N1 + m.N2; ++cj)
      for (double xi : {-0.7, 0.0, 0.6})
        for (double eta : {-0.5, 0.4}) {
          const Grad2 g = cell_gradient(m, ci, cj, f, xi, eta);
          CHECK(g.dx == doctest::Approx(3.0).epsilon(1e-12));
          CHECK(g.dz == doctest::Approx(-1.0).epsilon(1e-12));
        }

  // Same exactness through the assembled quadrature gradients.
  for (int ci : {0, 5, 11})
    for (int cj : {0, 4, 7})
      for (const QuadPoint& qp : element_quadrature(m, ci, cj)) {
        double gx = 0.0, gz = 0.0;
        const auto nodes = m.cell_nodes(ci, cj);
        for (int a = 0; a < 4; ++a) {
          gx += qp.dphidx[a] * f[nodes[a]];
          gz += qp.dphidz[a] * f[nodes[a]];
        }
        CHECK(gx == doctest::Approx(3.0).epsilon(1e-12));
        CHECK(gz == doctest::Approx(-1.0).epsilon(1e-12));
      }
}

TEST_CASE("transform to rectangles is an exact reindexing") {
  const PhysicalParams p{};
  const Profile prof = Profile::builtin(p, "cosine(-0.5)", 16);
  const LayeredMesh m = build_mesh(prof, 4, 6);

  // f = z + H becomes eta * (u + H) on R1 and eta - 1 + u + H on R2.
  std::vector<double> f(m.num_nodes());
  for (int i = 0; i <= m.Nx; ++i)
    for (int j = 0; j < m.rows(); ++j)
      f[m.node(i, j)] = m.zs[m.node(i, j)] + p.H;

  const RectField rf = transform_field_to_rectangles(f, m);
  for (int i = 0; i <= m.Nx; ++i) {
    const double w = prof.u[i] + p.H;
    for (int j = 0; j <= m.N1; ++j) {
      const double eta = static_cast<double>(j) / m.N1;
      CHECK(rf.r1[rf.idx1(i, j)] == doctest::Approx(eta * w).epsilon(1e-13));
    }
    for (int j = 0; j <= m.N2; ++j) {
      const double z = prof.u[i] + p.d * j / m.N2;
      CHECK(rf.r2[rf.idx2(i, j)] == doctest::Approx(z + p.H).epsilon(1e-13));
    }
    CHECK(rf.masked[i] == 0);
  }

  // Interface row is shared between the two rectangles.
  for (int i = 0; i <= m.Nx; ++i)
    CHECK(rf.r1[rf.idx1(i, m.N1)] == rf.r2[rf.idx2(i, 0)]);

  const Profile par = Profile::builtin(p, "parabola_touch", 8);
  const LayeredMesh mp = build_mesh(par, 3, 3);
  const RectField rp = transform_field_to_rectangles(
      std::vector<double>(mp.num_nodes(), 1.0), mp);
  CHECK(rp.masked[4] == 1);
  CHECK(rp.masked[3] == 0);
}

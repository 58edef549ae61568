#include <doctest.h>

#include <cmath>

#include "memsfield/diagnostics.hpp"
#include "memsfield/solver.hpp"

using namespace memsfield;

namespace {

LayeredMesh tiny_flat_mesh() {
  const PhysicalParams p{};
  return build_mesh(Profile::builtin(p, "flat", 4), 1, 1);
}

}  // namespace

TEST_CASE("cg solves a hand-built 1x1 system in one iteration") {
  const LayeredMesh m = tiny_flat_mesh();
  SparseSystem sys;
  sys.n = 1;
  sys.row_ptr = {0, 1};
  sys.col = {0};
  sys.val = {2.0};
  sys.b = {4.0};
  sys.node_of_free = {m.node(1, 1)};
  sys.free_of_node.assign(m.num_nodes(), -1);
  sys.free_of_node[m.node(1, 1)] = 0;

  CGStats stats;
  const Field chi = solve_cg(sys, m, 1e-12, 10, &stats);
  CHECK(stats.iters == 1);
  CHECK(chi.values[m.node(1, 1)] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(chi.values[m.node(0, 0)] == 0.0);
}

TEST_CASE("zero load returns the zero field without iterating") {
  const LayeredMesh m = tiny_flat_mesh();
  SparseSystem sys;
  sys.n = 2;
  sys.row_ptr = {0, 1, 2};
  sys.col = {0, 1};
  sys.val = {1.0, 3.0};
  sys.b = {0.0, 0.0};
  sys.node_of_free = {m.node(1, 1), m.node(2, 1)};
  sys.free_of_node.assign(m.num_nodes(), -1);

  CGStats stats;
  const Field chi = solve_cg(sys, m, 1e-12, 10, &stats);
  CHECK(stats.iters == 0);
  for (double v : chi.values) CHECK(v == 0.0);
}

TEST_CASE("unit-square element stiffness matches the textbook values") {
  PhysicalParams p{};
  p.sigma1 = 1.0;
  p.sigma2 = 1.0;
  p.L = 2.0;
  // L = 2, Nx = 4 gives hx = 1; N1 = 1 gives a 1 x 1 lower cell.
  const Profile prof = Profile::builtin(p, "flat", 4);
  const LayeredMesh m = build_mesh(prof, 1, 1);

  double ke[4][4] = {};
  for (const QuadPoint& qp : element_quadrature(m, 0, 0))
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        ke[a][b] += qp.w * (qp.dphidx[a] * qp.dphidx[b] +
                            qp.dphidz[a] * qp.dphidz[b]);

  // Laplace stiffness of the bilinear unit square: diagonal 2/3,
  // edge-neighbors -1/6, diagonal neighbor -1/3.
  for (int a = 0; a < 4; ++a) {
    CHECK(ke[a][a] == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
    CHECK(ke[a][(a + 1) % 4] == doctest::Approx(-1.0 / 6.0).epsilon(1e-13));
    CHECK(ke[a][(a + 2) % 4] == doctest::Approx(-1.0 / 3.0).epsilon(1e-13));
    double row = 0.0;
    for (int b = 0; b < 4; ++b) row += ke[a][b];
    CHECK(row == doctest::Approx(0.0).epsilon(1e-13));  // constants in kernel
  }
}

TEST_CASE("assembled system is symmetric with zero-sum element rows") {
  const PhysicalParams p{};
  const Profile prof = Profile::builtin(p, "cosine(-0.5)", 8);
  const LayeredMesh m = build_mesh(prof, 4, 4);
  const SparseSystem sys = assemble(m, LiftSpec::from(p), prof);

  CHECK(sys.n > 0);
  // symmetry: A[p][q] == A[q][p]
  auto entry = [&](int r, int c) {
    for (int k = sys.row_ptr[r]; k < sys.row_ptr[r + 1]; ++k)
      if (sys.col[k] == c) return sys.val[k];
    return 0.0;
  };
  for (int r = 0; r < sys.n; ++r)
    for (int k = sys.row_ptr[r]; k < sys.row_ptr[r + 1]; ++k) {
      CHECK(sys.val[k] == doctest::Approx(entry(sys.col[k], r)).epsilon(1e-13));
      if (sys.col[k] == r) CHECK(sys.val[k] > 0.0);
    }
}

TEST_CASE("flat two-layer solve reproduces the closed form nodally") {
  const PhysicalParams p{};  // CASE-FLAT: sigma 1/2, unit geometry
  const Profile prof = Profile::builtin(p, "flat", 8);
  const SolveResult res = solve_problem(prof, 8, 8, 1e-12);

  const LayeredMesh& m = res.mesh;
  double linf = 0.0;
  for (int i = 0; i <= m.Nx; ++i)
    for (int j = 0; j < m.rows(); ++j) {
      const int nd = m.node(i, j);
      linf = std::max(linf,
                      std::abs(res.psi.values[nd] - flat_psi_exact(p, m.zs[nd])));
    }
  CHECK(linf <= 1e-9);

  // Interface potential sigma2 V H / (sigma2 H + sigma1 d) = 2/3.
  CHECK(res.psi.values[m.node(4, m.N1)] == doctest::Approx(2.0 / 3.0).epsilon(1e-10));

  // Interpolant energy is exact for the piecewise-linear solution.
  CHECK(res.report.energy_psi == doctest::Approx(flat_energy_exact(p)).epsilon(1e-10));
  CHECK(flat_energy_exact(p) == doctest::Approx(2.0 / 3.0));
  CHECK(res.report.cg_residual <= 1e-12);
}

TEST_CASE("lift energy converges to its closed form") {
  const PhysicalParams p{};
  // Flat lift is h = z^2 on the plate: energy = (sigma2/2) int 4 z^2 = 8/3.
  const LiftSpec lift = LiftSpec::from(p);
  const Profile prof = Profile::builtin(p, "flat", 8);
  double err[2];
  int k = 0;
  for (int n2 : {32, 64}) {
    const LayeredMesh m = build_mesh(prof, 4, n2);
    const Field h = lift_field(lift, prof, m);
    err[k++] = std::abs(dirichlet_energy(h, m) - 8.0 / 3.0);
  }
  CHECK(err[1] <= 1e-3);
  CHECK(err[1] <= 0.3 * err[0]);  // about O(h^2)
}

TEST_CASE("solved energy never exceeds the lift energy") {
  const PhysicalParams p{};
  for (const char* name :
       {"flat", "cosine(-0.5)", "bump(0.3)", "parabola_touch"}) {
    const Profile prof = Profile::builtin(p, name, 16);
    const SolveResult res = solve_problem(prof, 16, 16, 1e-11);
    CHECK(res.report.energy_psi <=
          res.report.energy_h * (1.0 + 1e-9));
    CHECK(res.report.energy_psi > 0.0);
  }
}

TEST_CASE("degenerate sigma gives the single-layer linear potential") {
  PhysicalParams p{};
  p.sigma2 = 1.0;  // sigma jump vanishes
  const Profile prof = Profile::builtin(p, "flat", 8);
  const SolveResult res = solve_problem(prof, 8, 8, 1e-12);
  const LayeredMesh& m = res.mesh;
  for (int i = 0; i <= m.Nx; ++i)
    for (int j = 0; j < m.rows(); ++j) {
      const int nd = m.node(i, j);
      const double want = (m.zs[nd] + 1.0) / 2.0;  // V (z+H)/(H+d)
      CHECK(res.psi.values[nd] == doctest::Approx(want).epsilon(1e-9));
    }
}

TEST_CASE("solution is independent of the initial guess") {
  const PhysicalParams p{};
  const Profile prof = Profile::builtin(p, "cosine(-0.5)", 12);
  const LayeredMesh m = build_mesh(prof, 8, 8);
  const SparseSystem sys = assemble(m, LiftSpec::from(p), prof);

  const Field a = solve_cg(sys, m, 1e-12, 50000);
  std::vector<double> ones(sys.n, 1.0);
  const Field b = solve_cg(sys, m, 1e-12, 50000, nullptr, &ones);
  for (size_t k = 0; k < a.values.size(); ++k)
    CHECK(a.values[k] == doctest::Approx(b.values[k]).epsilon(1e-7));
}

TEST_CASE("cg reports failure instead of returning garbage") {
  const PhysicalParams p{};
  const Profile prof = Profile::builtin(p, "cosine(-0.5)", 16);
  const LayeredMesh m = build_mesh(prof, 16, 16);
  const SparseSystem sys = assemble(m, LiftSpec::from(p), prof);
  CHECK_THROWS_AS(solve_cg(sys, m, 1e-12, 2), SolverError);
}

TEST_CASE("psi reconstruction pins the boundary values exactly") {
  const PhysicalParams p{};
  const Profile prof = Profile::builtin(p, "parabola_touch", 16);
  const SolveResult res = solve_problem(prof, 8, 8, 1e-10);
  const LayeredMesh& m = res.mesh;
  for (int i = 0; i <= m.Nx; ++i) {
    CHECK(res.psi.values[m.node(i, m.rows() - 1)] == p.V);
    CHECK(res.psi.values[m.node(i, 0)] == 0.0);
  }
  // Collapsed-column lower nodes are boundary too.
  for (int j = 0; j <= m.N1; ++j) CHECK(res.psi.values[m.node(8, j)] == 0.0);
}

TEST_CASE("galerkin residual matches the requested tolerance") {
  const PhysicalParams p{};
  const Profile prof = Profile::builtin(p, "bump(0.3)", 16);
  const LayeredMesh m = build_mesh(prof, 12, 12);
  const SparseSystem sys = assemble(m, LiftSpec::from(p), prof);
  CGStats stats;
  const Field chi = solve_cg(sys, m, 1e-11, 50000, &stats);

  std::vector<double> xf(sys.n), Ax(sys.n);
  for (int i = 0; i < sys.n; ++i) xf[i] = chi.values[sys.node_of_free[i]];
  sys.matvec(xf, Ax);
  double rn = 0.0, bn = 0.0;
  for (int i = 0; i < sys.n; ++i) {
    rn += (sys.b[i] - Ax[i]) * (sys.b[i] - Ax[i]);
    bn += sys.b[i] * sys.b[i];
  }
  CHECK(std::sqrt(rn) <= 1e-10 * std::sqrt(bn));
}

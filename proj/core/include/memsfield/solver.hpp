#pragma once

#include <optional>
#include <string>
#include <vector>

#include "memsfield/boundary.hpp"
#include "memsfield/mesh.hpp"

namespace memsfield {

enum class FieldKind { Chi, Lift, Psi };

/// Nodal scalar values on a LayeredMesh.
struct Field {
  FieldKind kind = FieldKind::Chi;
  std::vector<double> values;  // one per mesh node
};

/// Symmetric sparse system over the free (non-Dirichlet) nodes, CSR storage.
struct SparseSystem {
  int n = 0;
  std::vector<int> row_ptr;
  std::vector<int> col;
  std::vector<double> val;
  std::vector<double> b;
  std::vector<int> free_of_node;  // -1 for Dirichlet nodes
  std::vector<int> node_of_free;

  void matvec(const std::vector<double>& x, std::vector<double>& y) const;
};

/// Assemble the stiffness system for chi = psi - h over active elements.
/// The load is b[p] = -sum_e sigma_e int grad(h) . grad(phi_p) with grad(h)
/// evaluated analytically at Gauss points. Dirichlet rows/cols (bottom, top,
/// collapsed columns) are eliminated; side-wall nodes are free, which gives
/// the natural symmetry condition on the walls and keeps the flat
/// parallel-plate solution one-dimensional.
SparseSystem assemble(const LayeredMesh& mesh, const LiftSpec& lift,
                      const Profile& profile);

struct CGStats {
  int iters = 0;
  double residual = 0.0;  // final |Ax-b| / |b|
};

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Jacobi-preconditioned conjugate gradients. Returns the chi field expanded
/// to all mesh nodes (zeros at Dirichlet nodes). Throws SolverError on
/// non-convergence or negative curvature. Optional x0 is an initial guess
/// over free unknowns.
Field solve_cg(const SparseSystem& sys, const LayeredMesh& mesh, double tol,
               int max_iter, CGStats* stats = nullptr,
               const std::vector<double>* x0 = nullptr);

/// psi = chi + h nodewise; top nodes exactly V, bottom/collapsed exactly 0.
Field reconstruct_psi(const Field& chi, const LiftSpec& lift,
                      const Profile& profile, const LayeredMesh& mesh);

/// Nodal h field (interpolant of the lift).
Field lift_field(const LiftSpec& lift, const Profile& profile,
                 const LayeredMesh& mesh);

/// Gauss quadrature of (1/2) sigma |grad of the bilinear interpolant|^2 over
/// active elements.
double dirichlet_energy(const Field& field, const LayeredMesh& mesh);

/// L2(Omega) and H1(Omega) norms of the interpolant, by element quadrature.
double field_l2_norm(const Field& field, const LayeredMesh& mesh);
double field_h1_norm(const Field& field, const LayeredMesh& mesh);

struct SolveReport {
  double energy_psi = 0.0;
  double energy_h = 0.0;
  int cg_iters = 0;
  double cg_residual = 0.0;
  double flux_jump_l2 = 0.0;
  double h1_norm_chi = 0.0;
  double wall_time = 0.0;  // seconds
};

struct SolveResult {
  LayeredMesh mesh;
  Field chi;
  Field h;
  Field psi;
  SolveReport report;
};

/// Full pipeline: mesh, assemble, CG, reconstruct, energies, flux residual.
SolveResult solve_problem(const Profile& profile, int N1, int N2,
                          double cg_tol = 1e-10, int max_iter = 50000);

}  // namespace memsfield

#pragma once

#include <vector>

#include "memsfield/solver.hpp"

namespace memsfield {

struct FluxJumpResidual {
  double l2 = 0.0;
  double linf = 0.0;
};

/// One-sided conormal fluxes sigma grad(psi) . n at interface-edge midpoints
/// from the lower and upper elements; weighted L2 and max norms of the jump
/// along the interface, skipping collapsed columns.
FluxJumpResidual flux_jump_residual(const Field& psi, const LayeredMesh& mesh,
                                    const Profile& profile);

struct PoincareCheck {
  double lhs_norm = 0.0;  // |chi|_L2
  double bound = 0.0;     // 2 |H+d+u|_inf |dz chi|_L2
};

PoincareCheck poincare_check(const Field& chi, const LayeredMesh& mesh,
                             const Profile& profile);

struct H2Surrogate {
  double seminorm = 0.0;            // sqrt int (fxx^2 + 2 fxz^2 + fzz^2)
  double excluded_fraction = 0.0;   // fraction of columns masked out
  bool empty = false;               // layer fully masked
};

/// Second-difference H2 seminorm estimate of a nodal field on one layer,
/// computed on the transformed rectangle grids and mapped back through the
/// terrain transforms. Columns that are collapsed, or whose lower-layer
/// thickness is below `collapse_margin`, are excluded from layer 1.
H2Surrogate h2_surrogate(const Field& field, const LayeredMesh& mesh,
                         const Profile& profile, Layer layer,
                         double collapse_margin = -1.0);

struct IdentityReport {
  double lhs = 0.0;            // sum_i int sigma chi_xx chi_zz
  double rhs_mixed = 0.0;      // sum_i int sigma |chi_xz|^2
  double rhs_top = 0.0;        // top-boundary term, -sigma2 int chi_x (u' chi_zz + chi_xz)
  double rhs_interface = 0.0;  // interface term, -int [sigma chi_x (u' chi_zz + chi_xz)]
  double rhs_side = 0.0;       // side-wall term, sum_i sigma_i [int chi_x chi_zz dz]_{-L}^{+L}
  double residual = 0.0;       // lhs - (mixed + top + interface + side)
  double scale = 0.0;          // sum of the five magnitudes
};

/// Numerical check of the cross-derivative exchange identity for chi:
/// int sigma (chi_xx chi_zz - chi_xz^2) equals the boundary flux of the
/// field sigma chi_x (chi_zz, -chi_xz), split into its top, interface and
/// side-wall parts. The bottom part vanishes since chi = 0 there. With
/// homogeneous side data the wall term drops and the top/interface parts
/// reduce to the familiar -(sigma2/2) int u'' chi_z^2 and
/// -(1/2) int u''/(1+u'^2) [sigma |grad chi|^2] forms; the solver's natural
/// wall condition keeps chi nonzero on the walls, so the term is retained.
/// Refuses meshes with collapsed columns.
IdentityReport identity_check(const Field& chi, const LayeredMesh& mesh,
                              const Profile& profile);

enum class TraceWhere { InterfaceUpper, Top };

struct TraceData {
  std::vector<double> x;   // edge midpoints
  std::vector<double> gx;  // gradient components, upper-layer one-sided
  std::vector<double> gz;
  double l2 = 0.0;  // composite midpoint L2 norm of |g|
  double l4 = 0.0;
};

TraceData trace_gradient(const Field& psi, const LayeredMesh& mesh,
                         TraceWhere where);

/// Lp gap between two traces on the same x-midpoint grid.
double trace_gap(const TraceData& a, const TraceData& b, int p);

struct StudyRecord {
  int n = 0;
  double perturbation = 0.0;  // (1/n) |w|_inf
  double e_h1 = 0.0;
  double energy = 0.0;
  double trace_gap_p2 = 0.0;
  double trace_gap_p4 = 0.0;
};

struct StudyTable {
  std::vector<StudyRecord> records;
};

/// Profile-perturbation stability study: solves for v_n = base + (1/n) w,
/// zero-extends chi_n to the common box D x (-H, M), and measures the H1
/// distance to the base solution on a fixed comparison grid, along with
/// energies and top-trace gaps.
StudyTable stability_study(const Profile& base, const std::vector<double>& w,
                           const std::vector<int>& schedule, int N1, int N2,
                           double cg_tol = 1e-10);

struct KappaRecord {
  std::string profile;
  int level = 0;  // Nx = N1 = N2 = level
  double h2_layer1 = 0.0;
  double h2_layer2 = 0.0;
  double excluded_fraction = 0.0;
  bool excluded = false;      // profile filtered out by the kappa bound
  std::string reason;
};

struct KappaStudy {
  std::vector<KappaRecord> records;
  double max_surrogate = 0.0;
  /// finest/coarsest surrogate ratio per profile, keyed in record order;
  /// ratios where both levels are negligible are reported as 1.
  std::vector<std::pair<std::string, double>> ratios;
};

KappaStudy kappa_family_study(const PhysicalParams& params,
                              const std::vector<std::string>& profile_names,
                              double kappa, const std::vector<int>& levels,
                              double cg_tol = 1e-12);

/// Closed-form parallel-plate solution for the flat profile: piecewise
/// linear in z with interface value sigma2 V H / (sigma2 H + sigma1 d).
double flat_psi_exact(const PhysicalParams& p, double z);
double flat_energy_exact(const PhysicalParams& p);

struct RefineRecord {
  int level = 0;  // Nx = N1 = N2
  double h = 0.0;
  double l2_error = 0.0;
  double linf_error = 0.0;
  double energy = 0.0;
};

struct RefineStudy {
  std::vector<RefineRecord> records;
  double l2_order = 0.0;   // least-squares slope of log(e) vs log(h)
  bool exact_regime = false;  // all errors at rounding level; order is noise
};

/// Mesh-refinement study on the flat profile against the closed form.
RefineStudy refine_study(const PhysicalParams& params,
                         const std::vector<int>& levels, double cg_tol);

}  // namespace memsfield

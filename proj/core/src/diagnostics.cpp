#include "memsfield/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace memsfield {

namespace {

// ---------------------------------------------------------------------------
// Second-order finite-difference operators on a uniform (nx+1) x (nj+1) grid,
// row-major with index i*(nj+1)+j. One-sided 3-point (first derivative) and
// 4-point (second derivative) stencils at the edges, both exact on cubics.

struct Grid {
  int nx, nj;
  double hx, hj;
  int idx(int i, int j) const { return i * (nj + 1) + j; }
};

std::vector<double> d_di(const Grid& g, const std::vector<double>& v) {
  std::vector<double> out(v.size());
  for (int j = 0; j <= g.nj; ++j) {
    auto at = [&](int i) { return v[g.idx(i, j)]; };
    out[g.idx(0, j)] = (-3 * at(0) + 4 * at(1) - at(2)) / (2 * g.hx);
    out[g.idx(g.nx, j)] =
        (3 * at(g.nx) - 4 * at(g.nx - 1) + at(g.nx - 2)) / (2 * g.hx);
    for (int i = 1; i < g.nx; ++i)
      out[g.idx(i, j)] = (at(i + 1) - at(i - 1)) / (2 * g.hx);
  }
  return out;
}

std::vector<double> d_dj(const Grid& g, const std::vector<double>& v) {
  std::vector<double> out(v.size());
  for (int i = 0; i <= g.nx; ++i) {
    auto at = [&](int j) { return v[g.idx(i, j)]; };
    out[g.idx(i, 0)] = (-3 * at(0) + 4 * at(1) - at(2)) / (2 * g.hj);
    out[g.idx(i, g.nj)] =
        (3 * at(g.nj) - 4 * at(g.nj - 1) + at(g.nj - 2)) / (2 * g.hj);
    for (int j = 1; j < g.nj; ++j)
      out[g.idx(i, j)] = (at(j + 1) - at(j - 1)) / (2 * g.hj);
  }
  return out;
}

std::vector<double> d2_di2(const Grid& g, const std::vector<double>& v) {
  std::vector<double> out(v.size());
  const double h2 = g.hx * g.hx;
  for (int j = 0; j <= g.nj; ++j) {
    auto at = [&](int i) { return v[g.idx(i, j)]; };
    out[g.idx(0, j)] = (2 * at(0) - 5 * at(1) + 4 * at(2) - at(3)) / h2;
    out[g.idx(g.nx, j)] =
        (2 * at(g.nx) - 5 * at(g.nx - 1) + 4 * at(g.nx - 2) - at(g.nx - 3)) /
        h2;
    for (int i = 1; i < g.nx; ++i)
      out[g.idx(i, j)] = (at(i + 1) - 2 * at(i) + at(i - 1)) / h2;
  }
  return out;
}

std::vector<double> d2_dj2(const Grid& g, const std::vector<double>& v) {
  std::vector<double> out(v.size());
  const double h2 = g.hj * g.hj;
  for (int i = 0; i <= g.nx; ++i) {
    auto at = [&](int j) { return v[g.idx(i, j)]; };
    out[g.idx(i, 0)] = (2 * at(0) - 5 * at(1) + 4 * at(2) - at(3)) / h2;
    out[g.idx(i, g.nj)] =
        (2 * at(g.nj) - 5 * at(g.nj - 1) + 4 * at(g.nj - 2) - at(g.nj - 3)) /
        h2;
    for (int j = 1; j < g.nj; ++j)
      out[g.idx(i, j)] = (at(j + 1) - 2 * at(j) + at(j - 1)) / h2;
  }
  return out;
}

double trapw(int k, int n, double h) { return (k == 0 || k == n) ? 0.5 * h : h; }

// First derivative of a 1D sampled trace, centered inside, 3-point one-sided
// at the ends.
std::vector<double> deriv1d(const std::vector<double>& f, double h) {
  const int n = static_cast<int>(f.size()) - 1;
  std::vector<double> out(n + 1);
  out[0] = (-3 * f[0] + 4 * f[1] - f[2]) / (2 * h);
  out[n] = (3 * f[n] - 4 * f[n - 1] + f[n - 2]) / (2 * h);
  for (int i = 1; i < n; ++i) out[i] = (f[i + 1] - f[i - 1]) / (2 * h);
  return out;
}

// Physical second derivatives of a layer field recovered from the
// transformed-rectangle grid via the terrain maps.
struct LayerDerivs {
  Grid g;
  // physical first and second derivatives at grid nodes
  std::vector<double> fx, fz, fxx, fzz, fxz;
  // physical quadrature weight per node (includes the z-metric)
  std::vector<double> wq;
};

LayerDerivs layer_derivatives(const RectField& rf, const LayeredMesh& mesh,
                              const Profile& profile, Layer layer) {
  LayerDerivs ld;
  const auto& vals = layer == Layer::Lower ? rf.r1 : rf.r2;
  const int nj = layer == Layer::Lower ? rf.N1 : rf.N2;
  const double hj =
      layer == Layer::Lower ? 1.0 / rf.N1 : mesh.params.d / rf.N2;
  ld.g = {rf.Nx, nj, mesh.xs[1] - mesh.xs[0], hj};

  const auto Px = d_di(ld.g, vals);
  const auto Pe = d_dj(ld.g, vals);
  const auto Pxx = d2_di2(ld.g, vals);
  const auto Pee = d2_dj2(ld.g, vals);
  const auto Pxe = d_dj(ld.g, d_di(ld.g, vals));

  const int n = static_cast<int>(vals.size());
  ld.fx.resize(n);
  ld.fz.resize(n);
  ld.fxx.resize(n);
  ld.fzz.resize(n);
  ld.fxz.resize(n);
  ld.wq.resize(n);

  for (int i = 0; i <= ld.g.nx; ++i) {
    const double up = profile.du[i];
    const double upp = profile.d2u[i];
    const double w = profile.u[i] + mesh.params.H;
    for (int j = 0; j <= nj; ++j) {
      const int k = ld.g.idx(i, j);
      if (layer == Layer::Upper) {
        ld.fz[k] = Pe[k];
        ld.fzz[k] = Pee[k];
        ld.fx[k] = Px[k] - up * Pe[k];
        ld.fxz[k] = Pxe[k] - up * Pee[k];
        ld.fxx[k] =
            Pxx[k] - 2 * up * Pxe[k] - upp * Pe[k] + up * up * Pee[k];
        ld.wq[k] = trapw(i, ld.g.nx, ld.g.hx) * trapw(j, nj, hj);
      } else {
        const double eta = static_cast<double>(j) / nj;
        const double r = up / w;  // u'/(u+H)
        ld.fz[k] = Pe[k] / w;
        ld.fzz[k] = Pee[k] / (w * w);
        ld.fx[k] = Px[k] - eta * r * Pe[k];
        ld.fxz[k] = (Pxe[k] - r * (Pe[k] + eta * Pee[k])) / w;
        ld.fxx[k] = Pxx[k] + eta * (2 * r * r - upp / w) * Pe[k] -
                    2 * eta * r * Pxe[k] + eta * eta * r * r * Pee[k];
        ld.wq[k] = trapw(i, ld.g.nx, ld.g.hx) * trapw(j, nj, hj) * w;
      }
    }
  }
  return ld;
}

}  // namespace

FluxJumpResidual flux_jump_residual(const Field& psi, const LayeredMesh& mesh,
                                    const Profile& profile) {
  FluxJumpResidual res;
  const double hx = mesh.xs[1] - mesh.xs[0];
  double sum = 0.0;
  for (int ci = 0; ci < mesh.Nx; ++ci) {
    if (mesh.collapsed[ci] || mesh.collapsed[ci + 1]) continue;
    const double slope =
        (profile.u[ci + 1] - profile.u[ci]) / hx;  // interface edge slope
    const double len = hx * std::sqrt(1.0 + slope * slope);
    const double nx = -slope / std::sqrt(1.0 + slope * slope);
    const double nz = 1.0 / std::sqrt(1.0 + slope * slope);
    const Grad2 glo =
        cell_gradient(mesh, ci, mesh.N1 - 1, psi.values, 0.0, 1.0);
    const Grad2 gup = cell_gradient(mesh, ci, mesh.N1, psi.values, 0.0, -1.0);
    const double jump = mesh.params.sigma1 * (glo.dx * nx + glo.dz * nz) -
                        mesh.params.sigma2 * (gup.dx * nx + gup.dz * nz);
    sum += jump * jump * len;
    res.linf = std::max(res.linf, std::abs(jump));
  }
  res.l2 = std::sqrt(sum);
  return res;
}

PoincareCheck poincare_check(const Field& chi, const LayeredMesh& mesh,
                             const Profile& profile) {
  PoincareCheck pc;
  pc.lhs_norm = field_l2_norm(chi, mesh);

  double height = 0.0;
  for (double u : profile.u)
    height = std::max(height, std::abs(mesh.params.H + mesh.params.d + u));

  double dz2 = 0.0;
  for (int ci = 0; ci < mesh.Nx; ++ci)
    for (int cj = 0; cj < mesh.N1 + mesh.N2; ++cj) {
      if (!mesh.active[mesh.cell(ci, cj)]) continue;
      const auto nodes = mesh.cell_nodes(ci, cj);
      for (const QuadPoint& qp : element_quadrature(mesh, ci, cj)) {
        double gz = 0.0;
        for (int a = 0; a < 4; ++a) gz += qp.dphidz[a] * chi.values[nodes[a]];
        dz2 += qp.w * gz * gz;
      }
    }
  pc.bound = 2.0 * height * std::sqrt(dz2);
  return pc;
}

H2Surrogate h2_surrogate(const Field& field, const LayeredMesh& mesh,
                         const Profile& profile, Layer layer,
                         double collapse_margin) {
  if (collapse_margin < 0.0) collapse_margin = mesh.eps_touch;
  const RectField rf = transform_field_to_rectangles(field.values, mesh);

  std::vector<char> excluded(mesh.Nx + 1, 0);
  int nexc = 0;
  if (layer == Layer::Lower) {
    for (int i = 0; i <= mesh.Nx; ++i) {
      if (rf.masked[i] || profile.u[i] + mesh.params.H <= collapse_margin) {
        excluded[i] = 1;
        ++nexc;
      }
    }
  }

  H2Surrogate out;
  out.excluded_fraction = static_cast<double>(nexc) / (mesh.Nx + 1);
  if (nexc == mesh.Nx + 1) {
    out.empty = true;
    return out;
  }

  const LayerDerivs ld = layer_derivatives(rf, mesh, profile, layer);
  double s = 0.0;
  for (int i = 0; i <= ld.g.nx; ++i) {
    if (excluded[i]) continue;
    for (int j = 0; j <= ld.g.nj; ++j) {
      const int k = ld.g.idx(i, j);
      s += ld.wq[k] * (ld.fxx[k] * ld.fxx[k] + 2 * ld.fxz[k] * ld.fxz[k] +
                       ld.fzz[k] * ld.fzz[k]);
    }
  }
  out.seminorm = std::sqrt(s);
  return out;
}

IdentityReport identity_check(const Field& chi, const LayeredMesh& mesh,
                              const Profile& profile) {
  for (int i = 0; i <= mesh.Nx; ++i)
    if (mesh.collapsed[i])
      throw std::invalid_argument(
          "identity_check: profile touches the plate, identity requires an "
          "empty coincidence set");

  const RectField rf = transform_field_to_rectangles(chi.values, mesh);
  const LayerDerivs lo = layer_derivatives(rf, mesh, profile, Layer::Lower);
  const LayerDerivs up = layer_derivatives(rf, mesh, profile, Layer::Upper);

  IdentityReport rep;
  auto accumulate = [&](const LayerDerivs& ld, double sigma) {
    for (size_t k = 0; k < ld.fx.size(); ++k) {
      rep.lhs += sigma * ld.wq[k] * ld.fxx[k] * ld.fzz[k];
      rep.rhs_mixed += sigma * ld.wq[k] * ld.fxz[k] * ld.fxz[k];
    }
  };
  accumulate(lo, mesh.params.sigma1);
  accumulate(up, mesh.params.sigma2);

  // Boundary terms. All of them are fluxes of sigma chi_x (chi_zz, -chi_xz);
  // on graph boundaries u' chi_zz + chi_xz is the derivative of the chi_z
  // trace along the boundary, so each term only needs first-derivative
  // traces differentiated within the boundary line. That avoids the poorly
  // convergent pointwise recovery of second derivatives at the boundary.
  const double hx = mesh.xs[1] - mesh.xs[0];

  std::vector<double> fz_top(mesh.Nx + 1), fx_top(mesh.Nx + 1);
  std::vector<double> fz_if1(mesh.Nx + 1), fx_if1(mesh.Nx + 1);
  std::vector<double> fz_if2(mesh.Nx + 1), fx_if2(mesh.Nx + 1);
  for (int i = 0; i <= mesh.Nx; ++i) {
    const int kt = up.g.idx(i, up.g.nj);
    const int k1 = lo.g.idx(i, lo.g.nj);
    const int k2 = up.g.idx(i, 0);
    fz_top[i] = up.fz[kt];
    fx_top[i] = up.fx[kt];
    fz_if1[i] = lo.fz[k1];
    fx_if1[i] = lo.fx[k1];
    fz_if2[i] = up.fz[k2];
    fx_if2[i] = up.fx[k2];
  }
  const auto dz_top = deriv1d(fz_top, hx);
  const auto dz_if1 = deriv1d(fz_if1, hx);
  const auto dz_if2 = deriv1d(fz_if2, hx);

  for (int i = 0; i <= mesh.Nx; ++i) {
    const double wx = trapw(i, mesh.Nx, hx);
    // top boundary, outward normal ds = (-u', 1) dx
    rep.rhs_top -= mesh.params.sigma2 * wx * fx_top[i] * dz_top[i];
    // interface: jump of sigma chi_x d/dx(chi_z trace), lower minus upper
    rep.rhs_interface -= wx * (mesh.params.sigma1 * fx_if1[i] * dz_if1[i] -
                               mesh.params.sigma2 * fx_if2[i] * dz_if2[i]);
  }

  // side walls x = +/-L, normal (+/-1, 0); nonzero under the natural wall
  // condition, zero when chi vanishes on the walls
  for (int side : {0, 1}) {
    const int i = side == 0 ? 0 : mesh.Nx;
    const double sgn = side == 0 ? -1.0 : 1.0;
    const double w = profile.u[i] + mesh.params.H;

    std::vector<double> fz1(lo.g.nj + 1), fx1(lo.g.nj + 1);
    for (int j = 0; j <= lo.g.nj; ++j) {
      fz1[j] = lo.fz[lo.g.idx(i, j)];
      fx1[j] = lo.fx[lo.g.idx(i, j)];
    }
    const auto dzz1 = deriv1d(fz1, w / mesh.N1);  // d/dz along the wall
    for (int j = 0; j <= lo.g.nj; ++j)
      rep.rhs_side += sgn * mesh.params.sigma1 *
                      trapw(j, lo.g.nj, w / mesh.N1) * fx1[j] * dzz1[j];

    std::vector<double> fz2(up.g.nj + 1), fx2(up.g.nj + 1);
    for (int j = 0; j <= up.g.nj; ++j) {
      fz2[j] = up.fz[up.g.idx(i, j)];
      fx2[j] = up.fx[up.g.idx(i, j)];
    }
    const auto dzz2 = deriv1d(fz2, mesh.params.d / mesh.N2);
    for (int j = 0; j <= up.g.nj; ++j)
      rep.rhs_side += sgn * mesh.params.sigma2 *
                      trapw(j, up.g.nj, mesh.params.d / mesh.N2) * fx2[j] *
                      dzz2[j];
  }

  rep.residual = rep.lhs - (rep.rhs_mixed + rep.rhs_top + rep.rhs_interface +
                            rep.rhs_side);
  rep.scale = std::abs(rep.lhs) + std::abs(rep.rhs_mixed) +
              std::abs(rep.rhs_top) + std::abs(rep.rhs_interface) +
              std::abs(rep.rhs_side);
  return rep;
}

TraceData trace_gradient(const Field& psi, const LayeredMesh& mesh,
                         TraceWhere where) {
  TraceData td;
  const double hx = mesh.xs[1] - mesh.xs[0];
  const int cj = where == TraceWhere::Top ? mesh.N1 + mesh.N2 - 1 : mesh.N1;
  const double eta = where == TraceWhere::Top ? 1.0 : -1.0;
  double s2 = 0.0, s4 = 0.0;
  for (int ci = 0; ci < mesh.Nx; ++ci) {
    const Grad2 g = cell_gradient(mesh, ci, cj, psi.values, 0.0, eta);
    td.x.push_back(0.5 * (mesh.xs[ci] + mesh.xs[ci + 1]));
    td.gx.push_back(g.dx);
    td.gz.push_back(g.dz);
    const double m2 = g.dx * g.dx + g.dz * g.dz;
    s2 += m2 * hx;
    s4 += m2 * m2 * hx;
  }
  td.l2 = std::sqrt(s2);
  td.l4 = std::pow(s4, 0.25);
  return td;
}

double trace_gap(const TraceData& a, const TraceData& b, int p) {
  if (a.x.size() != b.x.size())
    throw std::invalid_argument("trace_gap: incompatible traces");
  const double hx = a.x.size() > 1 ? a.x[1] - a.x[0] : 1.0;
  double s = 0.0;
  for (size_t k = 0; k < a.x.size(); ++k) {
    const double dx = a.gx[k] - b.gx[k];
    const double dz = a.gz[k] - b.gz[k];
    const double m = std::sqrt(dx * dx + dz * dz);
    s += std::pow(m, p) * hx;
  }
  return std::pow(s, 1.0 / p);
}

namespace {

// Point evaluation (value + gradient) of a nodal field on a terrain mesh,
// zero outside Omega(v).
void eval_point(const LayeredMesh& mesh, const std::vector<double>& nodal,
                double x, double z, double* value, Grad2* grad) {
  *value = 0.0;
  *grad = {0.0, 0.0};
  const double L = mesh.params.L, H = mesh.params.H, d = mesh.params.d;
  if (x < -L || x > L || z < -H) return;
  const double hx = mesh.xs[1] - mesh.xs[0];
  int k = std::clamp(static_cast<int>(std::floor((x + L) / hx)), 0, mesh.Nx - 1);
  const double xi = 2.0 * (x - mesh.xs[k]) / hx - 1.0;
  const double t = 0.5 * (xi + 1.0);
  const double u_edge = (1 - t) * mesh.zs[mesh.node(k, mesh.N1)] +
                        t * mesh.zs[mesh.node(k + 1, mesh.N1)];
  if (z > u_edge + d) return;

  int cj;
  double zb, zt;
  if (z <= u_edge) {
    const double thick = u_edge + H;
    if (thick <= mesh.eps_touch) return;  // collapsed sliver
    const double s = (z + H) / thick;
    cj = std::clamp(static_cast<int>(std::floor(s * mesh.N1)), 0, mesh.N1 - 1);
  } else {
    const double s = (z - u_edge) / d;
    cj = mesh.N1 +
         std::clamp(static_cast<int>(std::floor(s * mesh.N2)), 0, mesh.N2 - 1);
  }
  const auto nodes = mesh.cell_nodes(k, cj);
  zb = (1 - t) * mesh.zs[nodes[0]] + t * mesh.zs[nodes[1]];
  zt = (1 - t) * mesh.zs[nodes[3]] + t * mesh.zs[nodes[2]];
  if (zt <= zb) return;
  const double eta = std::clamp(2.0 * (z - zb) / (zt - zb) - 1.0, -1.0, 1.0);
  const auto sv = shape_values(xi, eta);
  for (int a = 0; a < 4; ++a) *value += sv[a] * nodal[nodes[a]];
  *grad = cell_gradient(mesh, k, cj, nodal, xi, eta);
}

}  // namespace

StudyTable stability_study(const Profile& base, const std::vector<double>& w,
                           const std::vector<int>& schedule, int N1, int N2,
                           double cg_tol) {
  if (w.size() != base.x.size())
    throw std::invalid_argument("stability_study: direction size mismatch");

  const auto& p = base.params;
  // Rebuild every family member, including the reference, through the same
  // sampled constructor so that w = 0 reproduces the base bitwise.
  auto member = [&](double scale) {
    std::vector<double> u(base.u);
    for (size_t i = 0; i < u.size(); ++i) u[i] += scale * w[i];
    return Profile::from_samples(p, base.x, std::move(u));
  };

  const Profile ref = member(0.0);
  std::vector<Profile> family;
  double linf_max = profile_norms(ref).l_inf;
  double w_inf = 0.0;
  for (double v : w) w_inf = std::max(w_inf, std::abs(v));
  for (size_t s = 0; s < schedule.size(); ++s) {
    family.push_back(member(1.0 / schedule[s]));
    const auto adm = classify(family.back());
    if (adm.cls == AdmissClass::Inadmissible)
      throw std::invalid_argument("stability_study: member n=" +
                                  std::to_string(schedule[s]) +
                                  " is inadmissible");
    linf_max = std::max(linf_max, profile_norms(family.back()).l_inf);
  }
  const double M = p.d + linf_max;

  const SolveResult base_res = solve_problem(ref, N1, N2, cg_tol);
  const TraceData base_trace =
      trace_gradient(base_res.psi, base_res.mesh, TraceWhere::Top);

  // Fixed comparison grid on D x (-H, M), 2x the solve resolution.
  const int ncx = 2 * ref.nx();
  const int ncz = 2 * (N1 + N2);
  const double hcx = 2.0 * p.L / ncx;
  const double hcz = (M + p.H) / ncz;

  StudyTable table;
  for (size_t s = 0; s < schedule.size(); ++s) {
    const SolveResult rn = solve_problem(family[s], N1, N2, cg_tol);
    double acc = 0.0;
    for (int i = 0; i < ncx; ++i)
      for (int j = 0; j < ncz; ++j) {
        const double xc = -p.L + (i + 0.5) * hcx;
        const double zc = -p.H + (j + 0.5) * hcz;
        double va, vb;
        Grad2 ga, gb;
        eval_point(rn.mesh, rn.chi.values, xc, zc, &va, &ga);
        eval_point(base_res.mesh, base_res.chi.values, xc, zc, &vb, &gb);
        const double dv = va - vb, dgx = ga.dx - gb.dx, dgz = ga.dz - gb.dz;
        acc += hcx * hcz * (dv * dv + dgx * dgx + dgz * dgz);
      }
    StudyRecord rec;
    rec.n = schedule[s];
    rec.perturbation = w_inf / schedule[s];
    rec.e_h1 = std::sqrt(acc);
    rec.energy = rn.report.energy_psi;
    const TraceData tn = trace_gradient(rn.psi, rn.mesh, TraceWhere::Top);
    rec.trace_gap_p2 = trace_gap(tn, base_trace, 2);
    rec.trace_gap_p4 = trace_gap(tn, base_trace, 4);
    table.records.push_back(rec);
  }
  return table;
}

KappaStudy kappa_family_study(const PhysicalParams& params,
                              const std::vector<std::string>& profile_names,
                              double kappa, const std::vector<int>& levels,
                              double cg_tol) {
  KappaStudy study;
  const double margin = 0.02 * params.H;  // fixed near-cusp exclusion band
  for (const auto& name : profile_names) {
    const Profile fine = Profile::builtin(params, name, 1024);
    const ProfileNorms norms = profile_norms(fine);
    if (norms.h2 > kappa) {
      KappaRecord rec;
      rec.profile = name;
      rec.excluded = true;
      rec.reason = "H2 norm " + std::to_string(norms.h2) +
                   " exceeds kappa " + std::to_string(kappa);
      study.records.push_back(rec);
      continue;
    }
    double coarsest = -1.0, finest = -1.0;
    for (int level : levels) {
      const Profile prof = Profile::builtin(params, name, level);
      const SolveResult res = solve_problem(prof, level, level, cg_tol);
      KappaRecord rec;
      rec.profile = name;
      rec.level = level;
      const H2Surrogate s1 =
          h2_surrogate(res.psi, res.mesh, prof, Layer::Lower, margin);
      const H2Surrogate s2 =
          h2_surrogate(res.psi, res.mesh, prof, Layer::Upper, margin);
      rec.h2_layer1 = s1.seminorm;
      rec.h2_layer2 = s2.seminorm;
      rec.excluded_fraction = s1.excluded_fraction;
      study.records.push_back(rec);
      const double total = s1.seminorm + s2.seminorm;
      study.max_surrogate = std::max(study.max_surrogate, total);
      if (coarsest < 0.0) coarsest = total;
      finest = total;
    }
    study.ratios.emplace_back(name, 0.0);
    auto& ratio = study.ratios.back().second;
    const double floor = 1e-6 * std::max(1.0, study.max_surrogate);
    if (coarsest <= floor && finest <= floor)
      ratio = 1.0;  // both levels negligible, ratio is noise over noise
    else
      ratio = finest / coarsest;
  }
  return study;
}

double flat_psi_exact(const PhysicalParams& p, double z) {
  const double delta = p.sigma2 * p.H + p.sigma1 * p.d;
  const double psi_sigma = p.sigma2 * p.V * p.H / delta;
  if (z <= 0.0) return psi_sigma * (z + p.H) / p.H;
  return psi_sigma + (p.V - psi_sigma) * z / p.d;
}

double flat_energy_exact(const PhysicalParams& p) {
  const double delta = p.sigma2 * p.H + p.sigma1 * p.d;
  return p.L * p.V * p.V * p.sigma1 * p.sigma2 / delta;
}

RefineStudy refine_study(const PhysicalParams& params,
                         const std::vector<int>& levels, double cg_tol) {
  RefineStudy study;
  for (int level : levels) {
    const Profile prof = Profile::builtin(params, "flat", level);
    const SolveResult res = solve_problem(prof, level, level, cg_tol);
    RefineRecord rec;
    rec.level = level;
    rec.h = 2.0 * params.L / level;
    rec.energy = res.report.energy_psi;
    for (int i = 0; i <= res.mesh.Nx; ++i)
      for (int j = 0; j < res.mesh.rows(); ++j) {
        const int nd = res.mesh.node(i, j);
        rec.linf_error =
            std::max(rec.linf_error,
                     std::abs(res.psi.values[nd] -
                              flat_psi_exact(params, res.mesh.zs[nd])));
      }
    double acc = 0.0;
    for (int ci = 0; ci < res.mesh.Nx; ++ci)
      for (int cj = 0; cj < res.mesh.N1 + res.mesh.N2; ++cj) {
        const auto nodes = res.mesh.cell_nodes(ci, cj);
        static const double g = 1.0 / std::sqrt(3.0);
        static const double pts[4][2] = {{-g, -g}, {g, -g}, {g, g}, {-g, g}};
        const auto qps = element_quadrature(res.mesh, ci, cj);
        for (int q = 0; q < 4; ++q) {
          const auto sv = shape_values(pts[q][0], pts[q][1]);
          double v = 0.0;
          for (int a = 0; a < 4; ++a) v += sv[a] * res.psi.values[nodes[a]];
          const double e = v - flat_psi_exact(params, qps[q].z);
          acc += qps[q].w * e * e;
        }
      }
    rec.l2_error = std::sqrt(acc);
    study.records.push_back(rec);
  }

  // Least-squares slope of log(error) against log(h).
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int n = static_cast<int>(study.records.size());
  for (const auto& r : study.records) {
    const double lx = std::log(r.h), ly = std::log(std::max(r.l2_error, 1e-300));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  if (n >= 2) study.l2_order = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  study.exact_regime = true;
  for (const auto& r : study.records)
    if (r.l2_error > 1e-8 * std::max(1.0, params.V)) study.exact_regime = false;
  return study;
}

}  // namespace memsfield

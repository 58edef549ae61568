#include "memsfield/mesh.hpp"

#include <cmath>
#include <stdexcept>

namespace memsfield {

std::string to_string(NodeTag t) {
  switch (t) {
    case NodeTag::Interior: return "interior";
    case NodeTag::Bottom: return "bottom";
    case NodeTag::Side: return "side";
    case NodeTag::Top: return "top";
    case NodeTag::Interface: return "interface";
  }
  return "?";
}

LayeredMesh build_mesh(const Profile& profile, int N1, int N2,
                       double eps_touch) {
  if (N1 < 1 || N2 < 1)
    throw std::invalid_argument("build_mesh: N1, N2 must be >= 1");
  const auto& p = profile.params;
  if (eps_touch < 0.0) eps_touch = default_eps_touch(p);

  LayeredMesh m;
  m.Nx = profile.nx();
  m.N1 = N1;
  m.N2 = N2;
  m.params = p;
  m.eps_touch = eps_touch;
  m.xs = profile.x;
  m.zs.resize(m.num_nodes());
  m.tags.assign(m.num_nodes(), NodeTag::Interior);
  m.collapsed.resize(m.Nx + 1);

  for (int i = 0; i <= m.Nx; ++i) {
    const double ui = profile.u[i];
    const double w = ui + p.H;
    const bool col = w <= eps_touch;
    m.collapsed[i] = col ? 1 : 0;
    for (int j = 0; j <= N1; ++j)
      m.zs[m.node(i, j)] = col ? -p.H : -p.H + w * j / N1;
    if (col) m.zs[m.node(i, N1)] = -p.H;
    for (int j = 1; j <= N2; ++j)
      m.zs[m.node(i, N1 + j)] = (col ? -p.H : ui) + p.d * j / N2;

    for (int j = 0; j < m.rows(); ++j) {
      NodeTag t = NodeTag::Interior;
      if (j == 0) t = NodeTag::Bottom;
      else if (j == m.rows() - 1) t = NodeTag::Top;
      else if (j == N1) t = NodeTag::Interface;
      else if (i == 0 || i == m.Nx) t = NodeTag::Side;
      if (col && j <= N1) t = NodeTag::Bottom;  // interface merged into boundary
      m.tags[m.node(i, j)] = t;
    }
  }

  // Lower-layer cells between two collapsed columns have zero area.
  m.active.assign(m.num_cells(), 1);
  for (int ci = 0; ci < m.Nx; ++ci) {
    if (m.collapsed[ci] && m.collapsed[ci + 1])
      for (int cj = 0; cj < N1; ++cj) m.active[m.cell(ci, cj)] = 0;
  }
  return m;
}

std::array<double, 4> shape_values(double xi, double eta) {
  return {0.25 * (1 - xi) * (1 - eta), 0.25 * (1 + xi) * (1 - eta),
          0.25 * (1 + xi) * (1 + eta), 0.25 * (1 - xi) * (1 + eta)};
}

namespace {

struct RefGrad {
  std::array<double, 4> dxi, deta;
};

RefGrad shape_gradients(double xi, double eta) {
  RefGrad g;
  g.dxi = {-0.25 * (1 - eta), 0.25 * (1 - eta), 0.25 * (1 + eta),
           -0.25 * (1 + eta)};
  g.deta = {-0.25 * (1 - xi), -0.25 * (1 + xi), 0.25 * (1 + xi),
            0.25 * (1 - xi)};
  return g;
}

struct Jac {
  double j11, j12, j21, j22, det;
};

Jac jacobian(const LayeredMesh& mesh, int ci, int cj, double xi, double eta) {
  const auto nodes = mesh.cell_nodes(ci, cj);
  const RefGrad g = shape_gradients(xi, eta);
  Jac J{0, 0, 0, 0, 0};
  for (int a = 0; a < 4; ++a) {
    const double xa = mesh.xs[nodes[a] / mesh.rows()];
    const double za = mesh.zs[nodes[a]];
    J.j11 += g.dxi[a] * xa;
    J.j12 += g.deta[a] * xa;
    J.j21 += g.dxi[a] * za;
    J.j22 += g.deta[a] * za;
  }
  J.det = J.j11 * J.j22 - J.j12 * J.j21;
  return J;
}

}  // namespace

std::array<QuadPoint, 4> element_quadrature(const LayeredMesh& mesh, int ci,
                                            int cj) {
  static const double g = 1.0 / std::sqrt(3.0);
  static const double pts[4][2] = {{-g, -g}, {g, -g}, {g, g}, {-g, g}};
  const auto nodes = mesh.cell_nodes(ci, cj);
  std::array<QuadPoint, 4> qp;
  for (int q = 0; q < 4; ++q) {
    const double xi = pts[q][0], eta = pts[q][1];
    const Jac J = jacobian(mesh, ci, cj, xi, eta);
    if (J.det <= 0.0)
      throw std::runtime_error("element_quadrature: degenerate Jacobian in cell (" +
                               std::to_string(ci) + "," + std::to_string(cj) + ")");
    const RefGrad rg = shape_gradients(xi, eta);
    const auto sv = shape_values(xi, eta);
    QuadPoint& p = qp[q];
    p.w = J.det;  // each Gauss weight is 1
    p.x = p.z = 0.0;
    for (int a = 0; a < 4; ++a) {
      const double xa = mesh.xs[nodes[a] / mesh.rows()];
      const double za = mesh.zs[nodes[a]];
      p.x += sv[a] * xa;
      p.z += sv[a] * za;
      // J^{-T} * ref gradient
      p.dphidx[a] = (J.j22 * rg.dxi[a] - J.j21 * rg.deta[a]) / J.det;
      p.dphidz[a] = (-J.j12 * rg.dxi[a] + J.j11 * rg.deta[a]) / J.det;
    }
  }
  return qp;
}

Grad2 cell_gradient(const LayeredMesh& mesh, int ci, int cj,
                    const std::vector<double>& nodal, double xi, double eta) {
  const auto nodes = mesh.cell_nodes(ci, cj);
  const Jac J = jacobian(mesh, ci, cj, xi, eta);
  if (J.det <= 0.0)
    throw std::runtime_error("cell_gradient: degenerate Jacobian");
  const RefGrad rg = shape_gradients(xi, eta);
  double fxi = 0.0, feta = 0.0;
  for (int a = 0; a < 4; ++a) {
    fxi += rg.dxi[a] * nodal[nodes[a]];
    feta += rg.deta[a] * nodal[nodes[a]];
  }
  return {(J.j22 * fxi - J.j21 * feta) / J.det,
          (-J.j12 * fxi + J.j11 * feta) / J.det};
}

double LayeredMesh::area_active() const {
  double area = 0.0;
  for (int ci = 0; ci < Nx; ++ci)
    for (int cj = 0; cj < N1 + N2; ++cj) {
      if (!active[cell(ci, cj)]) continue;
      // shoelace over the straight-sided quad
      const auto n = cell_nodes(ci, cj);
      double s = 0.0;
      for (int a = 0; a < 4; ++a) {
        const int b = (a + 1) % 4;
        const double xa = xs[n[a] / rows()], za = zs[n[a]];
        const double xb = xs[n[b] / rows()], zb = zs[n[b]];
        s += xa * zb - xb * za;
      }
      area += 0.5 * s;
    }
  return area;
}

RectField transform_field_to_rectangles(const std::vector<double>& nodal,
                                        const LayeredMesh& mesh) {
  RectField rf;
  rf.Nx = mesh.Nx;
  rf.N1 = mesh.N1;
  rf.N2 = mesh.N2;
  rf.r1.assign((mesh.Nx + 1) * (mesh.N1 + 1), 0.0);
  rf.r2.assign((mesh.Nx + 1) * (mesh.N2 + 1), 0.0);
  rf.masked.assign(mesh.Nx + 1, 0);
  for (int i = 0; i <= mesh.Nx; ++i) {
    rf.masked[i] = mesh.collapsed[i];
    for (int j = 0; j <= mesh.N1; ++j)
      rf.r1[rf.idx1(i, j)] = nodal[mesh.node(i, j)];
    for (int j = 0; j <= mesh.N2; ++j)
      rf.r2[rf.idx2(i, j)] = nodal[mesh.node(i, mesh.N1 + j)];
  }
  return rf;
}

}  // namespace memsfield

#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "memsfield/boundary.hpp"
#include "memsfield/geometry.hpp"

namespace memsfield {

enum class NodeTag : std::uint8_t { Interior, Bottom, Side, Top, Interface };
enum class Layer : std::uint8_t { Lower, Upper };

std::string to_string(NodeTag t);

/// Interface-fitted, terrain-following quadrilateral mesh over
/// Omega_1(u) + Omega_2(u). Nodes are logically rectangular: column i holds
/// N1+1 nodes equispaced in [-H, u(x_i)] and N2 further nodes equispaced in
/// [u(x_i), u(x_i)+d], sharing the interface node at row j = N1. On a
/// collapsed column (u(x_i)+H <= eps_touch) all lower nodes sit at z = -H
/// and carry the Bottom tag, so the interface merges with the boundary.
struct LayeredMesh {
  int Nx = 0;
  int N1 = 0;
  int N2 = 0;
  PhysicalParams params;
  std::vector<double> xs;         // Nx+1 column abscissae
  std::vector<double> zs;         // node z, (Nx+1)*(N1+N2+1), column-major in j
  std::vector<NodeTag> tags;      // per node
  std::vector<char> collapsed;    // per column
  std::vector<char> active;       // per cell, Nx*(N1+N2)
  double eps_touch = 0.0;

  int rows() const { return N1 + N2 + 1; }
  int num_nodes() const { return (Nx + 1) * rows(); }
  int num_cells() const { return Nx * (N1 + N2); }

  int node(int i, int j) const { return i * rows() + j; }
  int cell(int ci, int cj) const { return ci * (N1 + N2) + cj; }
  Layer cell_layer(int cj) const { return cj < N1 ? Layer::Lower : Layer::Upper; }
  double cell_sigma(int cj) const {
    return cell_layer(cj) == Layer::Lower ? params.sigma1 : params.sigma2;
  }
  /// Counter-clockwise corner node indices of cell (ci, cj).
  std::array<int, 4> cell_nodes(int ci, int cj) const {
    return {node(ci, cj), node(ci + 1, cj), node(ci + 1, cj + 1),
            node(ci, cj + 1)};
  }
  bool is_dirichlet(int n) const {
    return tags[n] == NodeTag::Bottom || tags[n] == NodeTag::Top;
  }

  double area_active() const;
};

/// Builds the mesh; rejects N1, N2 < 1. eps_touch < 0 selects the default.
LayeredMesh build_mesh(const Profile& profile, int N1, int N2,
                       double eps_touch = -1.0);

/// One 2x2 Gauss point of an isoparametric bilinear element.
struct QuadPoint {
  double x = 0.0, z = 0.0;  // physical location
  double w = 0.0;           // weight * |J|
  // physical gradients of the four corner shape functions
  std::array<double, 4> dphidx{};
  std::array<double, 4> dphidz{};
};

/// 2x2 Gauss data for an active cell. Throws std::runtime_error on a
/// non-positive Jacobian.
std::array<QuadPoint, 4> element_quadrature(const LayeredMesh& mesh, int ci,
                                            int cj);

/// Bilinear shape values at reference point (xi, eta) in [-1,1]^2, corner
/// order matching cell_nodes.
std::array<double, 4> shape_values(double xi, double eta);

/// Physical gradient of the bilinear interpolant of `nodal` on cell (ci,cj)
/// at reference point (xi, eta).
Grad2 cell_gradient(const LayeredMesh& mesh, int ci, int cj,
                    const std::vector<double>& nodal, double xi, double eta);

/// Nodal values of a field pushed onto the transformed rectangles
/// R1 = D x (0,1) and R2 = D x (1, 1+d). Because the mesh is
/// terrain-following with equispaced rows, this is an exact reindexing.
/// Collapsed columns have no meaningful R1 values and are masked.
struct RectField {
  int Nx = 0, N1 = 0, N2 = 0;
  std::vector<double> r1;       // (Nx+1)*(N1+1), eta = j/N1
  std::vector<double> r2;       // (Nx+1)*(N2+1), eta = 1 + j*d/N2
  std::vector<char> masked;     // per column, lower-layer values invalid
  int idx1(int i, int j) const { return i * (N1 + 1) + j; }
  int idx2(int i, int j) const { return i * (N2 + 1) + j; }
};

RectField transform_field_to_rectangles(const std::vector<double>& nodal,
                                        const LayeredMesh& mesh);

}  // namespace memsfield

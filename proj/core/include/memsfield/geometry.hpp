#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace memsfield {

/// Physical parameters of the two-layer device: the footprint D = (-L, L),
/// ground-plate depth H, plate thickness d, top potential V, and the two
/// permittivities sigma1 (gap) and sigma2 (plate).
struct PhysicalParams {
  double L = 1.0;
  double H = 1.0;
  double d = 1.0;
  double V = 1.0;
  double sigma1 = 1.0;
  double sigma2 = 2.0;

  double sigma_jump() const { return sigma1 - sigma2; }

  /// Throws std::invalid_argument unless all parameters are positive.
  /// sigma1 == sigma2 is accepted (the interface becomes invisible); callers
  /// that care can warn via `degenerate_sigma`.
  void validate() const;

  bool degenerate_sigma() const { return sigma1 == sigma2; }
};

/// Default tolerances derived from the physical scales.
double default_eps_touch(const PhysicalParams& p);  // 1e-9 * H
double default_eps_bc(const PhysicalParams& p);     // 1e-12 * max(1, H)

/// A deflection profile u sampled on a uniform grid over [-L, L] together
/// with first and second derivative samples. Derivatives are analytic for
/// built-in profiles and centered finite differences (one-sided 3-point at
/// the endpoints) for sampled data.
class Profile {
 public:
  PhysicalParams params;
  std::vector<double> x;    // Nx+1 abscissae, uniform ascending
  std::vector<double> u;    // deflection samples, u[0] = u[Nx] = 0
  std::vector<double> du;   // first derivative samples
  std::vector<double> d2u;  // second derivative samples

  int nx() const { return static_cast<int>(x.size()) - 1; }
  double dx() const { return x[1] - x[0]; }

  /// Linear interpolation of u (and derivative samples) at arbitrary x.
  double u_at(double xq) const;
  double du_at(double xq) const;
  double d2u_at(double xq) const;

  /// Build from raw samples; derivatives via finite differences. Values in
  /// (-H - eps_geo, -H) are clamped to -H; values below that are rejected.
  static Profile from_samples(const PhysicalParams& p, std::vector<double> x,
                              std::vector<double> u);

  /// Build from analytic callbacks on Nx+1 uniform points.
  static Profile from_function(const PhysicalParams& p, int nx_cells,
                               const std::function<double(double)>& f,
                               const std::function<double(double)>& df,
                               const std::function<double(double)>& d2f);

  /// Built-in profiles selectable by name: "flat", "parabola_touch",
  /// "cosine(a)", "bump(a)". Throws std::invalid_argument on unknown names.
  static Profile builtin(const PhysicalParams& p, const std::string& name,
                         int nx_cells);

 private:
  void check_invariants();
};

enum class AdmissClass { InteriorS, BarSOnly, Inadmissible };

std::string to_string(AdmissClass c);

/// Inclusive index run [begin, end] of grid nodes where u touches -H.
struct IndexInterval {
  int begin = 0;
  int end = 0;
};

struct Admissibility {
  AdmissClass cls = AdmissClass::Inadmissible;
  std::vector<std::string> reasons;
  std::vector<IndexInterval> coincidence;
};

/// Classify a profile against the admissible sets: InteriorS (u > -H and the
/// endpoint sign condition holds), BarSOnly (touching but the sign condition
/// holds), or Inadmissible. Endpoint slopes use one-sided 3-point stencils;
/// the condition at +L is jump(sigma)*u'(L) <= eps_sign and the mirrored one
/// at -L. Pass eps_sign <= 0 to use the scale-aware default.
Admissibility classify(const Profile& profile, double eps_sign = -1.0,
                       double eps_touch = -1.0);

struct ProfileNorms {
  double l_inf = 0.0;
  double h1 = 0.0;
  double h2 = 0.0;
};

/// Trapezoidal quadrature of u^2 + u'^2 (+ u''^2 for h2); l_inf is max|u|.
ProfileNorms profile_norms(const Profile& profile);

struct DomainSummary {
  double area1 = 0.0;       // |Omega_1(u)| = int (u + H) dx
  double area2 = 0.0;       // |Omega_2(u)| = 2 L d
  double arclength = 0.0;   // interface length int sqrt(1 + u'^2) dx
  double M = 0.0;           // d + max|u|
};

DomainSummary build_domain_summary(const Profile& profile);

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// T1 maps Omega_1(u) onto D x (0,1): (x, z) -> (x, (z+H)/(u(x)+H)).
/// Throws std::domain_error on a collapsed column (u(x)+H <= eps_touch).
Point2 map_T1(const Profile& profile, double x, double z,
              double eps_touch = -1.0);
Point2 map_T1_inv(const Profile& profile, double x, double eta,
                  double eps_touch = -1.0);

/// T2 maps Omega_2(u) onto D x (1, 1+d): (x, z) -> (x, z - u(x) + 1).
Point2 map_T2(const Profile& profile, double x, double z);
Point2 map_T2_inv(const Profile& profile, double x, double eta);

}  // namespace memsfield

#include "memsfield/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace memsfield {

void PhysicalParams::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("PhysicalParams: ") + what);
  };
  require(L > 0.0, "L must be positive");
  require(H > 0.0, "H must be positive");
  require(d > 0.0, "d must be positive");
  require(V > 0.0, "V must be positive");
  require(sigma1 > 0.0, "sigma1 must be positive");
  require(sigma2 > 0.0, "sigma2 must be positive");
}

double default_eps_touch(const PhysicalParams& p) { return 1e-9 * p.H; }
double default_eps_bc(const PhysicalParams& p) {
  return 1e-12 * std::max(1.0, p.H);
}

namespace {

// One-sided 3-point first derivative at the left end of a uniform grid.
double one_sided_slope(const std::vector<double>& f, double h) {
  return (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
}

double interp(const std::vector<double>& x, const std::vector<double>& f,
              double xq) {
  const double h = x[1] - x[0];
  const int n = static_cast<int>(x.size()) - 1;
  double s = (xq - x[0]) / h;
  int k = std::clamp(static_cast<int>(std::floor(s)), 0, n - 1);
  double t = s - k;
  return (1.0 - t) * f[k] + t * f[k + 1];
}

}  // namespace

double Profile::u_at(double xq) const { return interp(x, u, xq); }
double Profile::du_at(double xq) const { return interp(x, du, xq); }
double Profile::d2u_at(double xq) const { return interp(x, d2u, xq); }

void Profile::check_invariants() {
  params.validate();
  const int n = nx();
  if (n < 4) throw std::invalid_argument("Profile: need at least 5 samples");
  if (u.size() != x.size())
    throw std::invalid_argument("Profile: x/u size mismatch");
  const double h = (x.back() - x.front()) / n;
  if (h <= 0.0) throw std::invalid_argument("Profile: x must be increasing");
  for (int i = 0; i < n; ++i) {
    const double hi = x[i + 1] - x[i];
    if (hi <= 0.0 || std::abs(hi - h) > 1e-9 * h)
      throw std::invalid_argument("Profile: x must be uniform ascending");
  }
  if (std::abs(x.front() + params.L) > 1e-9 * params.L ||
      std::abs(x.back() - params.L) > 1e-9 * params.L)
    throw std::invalid_argument("Profile: x must span [-L, L]");

  const double eps_bc = default_eps_bc(params);
  if (std::abs(u.front()) > eps_bc || std::abs(u.back()) > eps_bc)
    throw std::invalid_argument("Profile: u must vanish at the endpoints");
  u.front() = 0.0;
  u.back() = 0.0;

  const double eps_geo = default_eps_touch(params);
  for (double& v : u) {
    if (v < -params.H) {
      if (v < -params.H - eps_geo)
        throw std::invalid_argument("Profile: u < -H violates the obstacle");
      v = -params.H;  // clamp grazing samples onto the plate
    }
  }
}

Profile Profile::from_samples(const PhysicalParams& p, std::vector<double> xs,
                              std::vector<double> us) {
  Profile prof;
  prof.params = p;
  prof.x = std::move(xs);
  prof.u = std::move(us);
  prof.check_invariants();
  const int n = prof.nx();
  const double h = prof.dx();
  prof.du.resize(n + 1);
  prof.d2u.resize(n + 1);
  for (int i = 1; i < n; ++i) {
    prof.du[i] = (prof.u[i + 1] - prof.u[i - 1]) / (2.0 * h);
    prof.d2u[i] = (prof.u[i + 1] - 2.0 * prof.u[i] + prof.u[i - 1]) / (h * h);
  }
  prof.du[0] = one_sided_slope(prof.u, h);
  {
    std::vector<double> rev(prof.u.rbegin(), prof.u.rend());
    prof.du[n] = -one_sided_slope(rev, h);
  }
  prof.d2u[0] = prof.d2u[1];
  prof.d2u[n] = prof.d2u[n - 1];
  return prof;
}

Profile Profile::from_function(const PhysicalParams& p, int nx_cells,
                               const std::function<double(double)>& f,
                               const std::function<double(double)>& df,
                               const std::function<double(double)>& d2f) {
  if (nx_cells < 4)
    throw std::invalid_argument("Profile: need at least 4 cells");
  Profile prof;
  prof.params = p;
  prof.x.resize(nx_cells + 1);
  prof.u.resize(nx_cells + 1);
  prof.du.resize(nx_cells + 1);
  prof.d2u.resize(nx_cells + 1);
  for (int i = 0; i <= nx_cells; ++i) {
    const double xi = -p.L + 2.0 * p.L * i / nx_cells;
    prof.x[i] = xi;
    prof.u[i] = f(xi);
    prof.du[i] = df(xi);
    prof.d2u[i] = d2f(xi);
  }
  prof.check_invariants();
  return prof;
}

namespace {

// Accepts "name" or "name(arg)".
bool parse_named(const std::string& s, const std::string& name, double* arg) {
  if (s == name) {
    *arg = 0.0;
    return true;
  }
  if (s.size() > name.size() + 2 && s.compare(0, name.size() + 1, name + "(") == 0 &&
      s.back() == ')') {
    *arg = std::stod(s.substr(name.size() + 1, s.size() - name.size() - 2));
    return true;
  }
  return false;
}

}  // namespace

Profile Profile::builtin(const PhysicalParams& p, const std::string& name,
                         int nx_cells) {
  const double pi = std::numbers::pi;
  double a = 0.0;
  if (name == "flat") {
    return from_function(
        p, nx_cells, [](double) { return 0.0; }, [](double) { return 0.0; },
        [](double) { return 0.0; });
  }
  if (name == "parabola_touch") {
    const double H = p.H, L = p.L;
    return from_function(
        p, nx_cells, [=](double x) { return H * (x * x / (L * L) - 1.0); },
        [=](double x) { return 2.0 * H * x / (L * L); },
        [=](double) { return 2.0 * H / (L * L); });
  }
  if (parse_named(name, "cosine", &a)) {
    const double L = p.L;
    return from_function(
        p, nx_cells, [=](double x) { return a * std::cos(pi * x / (2.0 * L)); },
        [=](double x) {
          return -a * pi / (2.0 * L) * std::sin(pi * x / (2.0 * L));
        },
        [=](double x) {
          return -a * pi * pi / (4.0 * L * L) * std::cos(pi * x / (2.0 * L));
        });
  }
  if (parse_named(name, "bump", &a)) {
    // C^1 compact bump on |x| <= L/2: u = -a (1 - (2x/L)^2)^2.
    const double L = p.L;
    auto s = [=](double x) { return 2.0 * x / L; };
    return from_function(
        p, nx_cells,
        [=](double x) {
          const double t = s(x);
          return std::abs(t) >= 1.0 ? 0.0 : -a * (1 - t * t) * (1 - t * t);
        },
        [=](double x) {
          const double t = s(x);
          return std::abs(t) >= 1.0 ? 0.0 : (8.0 * a / L) * t * (1 - t * t);
        },
        [=](double x) {
          const double t = s(x);
          return std::abs(t) >= 1.0 ? 0.0
                                    : (16.0 * a / (L * L)) * (1 - 3.0 * t * t);
        });
  }
  throw std::invalid_argument("Profile: unknown builtin '" + name + "'");
}

std::string to_string(AdmissClass c) {
  switch (c) {
    case AdmissClass::InteriorS: return "InteriorS";
    case AdmissClass::BarSOnly: return "BarSOnly";
    case AdmissClass::Inadmissible: return "Inadmissible";
  }
  return "?";
}

Admissibility classify(const Profile& profile, double eps_sign,
                       double eps_touch) {
  const auto& p = profile.params;
  const int n = profile.nx();
  const double h = profile.dx();
  if (eps_touch < 0.0) eps_touch = default_eps_touch(p);

  // Endpoint slopes from the samples, one-sided 3-point.
  const double slope_left = one_sided_slope(profile.u, h);
  std::vector<double> rev(profile.u.rbegin(), profile.u.rend());
  const double slope_right = -one_sided_slope(rev, h);

  const double jump = p.sigma_jump();
  if (eps_sign < 0.0) {
    const double du_inf =
        std::max(std::abs(slope_left), std::abs(slope_right));
    eps_sign = 1e-10 * std::max(1.0, std::abs(jump) * du_inf);
  }

  Admissibility adm;
  // Coincidence: maximal runs with u[i] + H <= eps_touch.
  for (int i = 0; i <= n;) {
    if (profile.u[i] + p.H <= eps_touch) {
      int j = i;
      while (j + 1 <= n && profile.u[j + 1] + p.H <= eps_touch) ++j;
      adm.coincidence.push_back({i, j});
      i = j + 1;
    } else {
      ++i;
    }
  }

  bool ok = true;
  if (jump * slope_right > eps_sign) {
    ok = false;
    adm.reasons.push_back("sign condition fails at +L");
  }
  if (-jump * slope_left > eps_sign) {
    ok = false;
    adm.reasons.push_back("sign condition fails at -L");
  }
  if (!ok) {
    adm.cls = AdmissClass::Inadmissible;
  } else if (adm.coincidence.empty()) {
    adm.cls = AdmissClass::InteriorS;
  } else {
    adm.cls = AdmissClass::BarSOnly;
  }
  return adm;
}

ProfileNorms profile_norms(const Profile& profile) {
  const int n = profile.nx();
  const double h = profile.dx();
  ProfileNorms norms;
  double s0 = 0.0, s1 = 0.0, s2 = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double w = (i == 0 || i == n) ? 0.5 * h : h;
    s0 += w * profile.u[i] * profile.u[i];
    s1 += w * profile.du[i] * profile.du[i];
    s2 += w * profile.d2u[i] * profile.d2u[i];
    norms.l_inf = std::max(norms.l_inf, std::abs(profile.u[i]));
  }
  norms.h1 = std::sqrt(s0 + s1);
  norms.h2 = std::sqrt(s0 + s1 + s2);
  return norms;
}

DomainSummary build_domain_summary(const Profile& profile) {
  const auto& p = profile.params;
  const int n = profile.nx();
  const double h = profile.dx();
  DomainSummary s;
  double linf = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double w = (i == 0 || i == n) ? 0.5 * h : h;
    s.area1 += w * (profile.u[i] + p.H);
    s.arclength += w * std::sqrt(1.0 + profile.du[i] * profile.du[i]);
    linf = std::max(linf, std::abs(profile.u[i]));
  }
  s.area2 = 2.0 * p.L * p.d;
  s.M = p.d + linf;
  return s;
}

Point2 map_T1(const Profile& profile, double x, double z, double eps_touch) {
  if (eps_touch < 0.0) eps_touch = default_eps_touch(profile.params);
  const double w = profile.u_at(x) + profile.params.H;
  if (w <= eps_touch)
    throw std::domain_error("map_T1: collapsed column, u(x)+H <= eps_touch");
  return {x, (z + profile.params.H) / w};
}

Point2 map_T1_inv(const Profile& profile, double x, double eta,
                  double eps_touch) {
  if (eps_touch < 0.0) eps_touch = default_eps_touch(profile.params);
  const double w = profile.u_at(x) + profile.params.H;
  if (w <= eps_touch)
    throw std::domain_error("map_T1_inv: collapsed column");
  return {x, eta * w - profile.params.H};
}

Point2 map_T2(const Profile& profile, double x, double z) {
  return {x, z - profile.u_at(x) + 1.0};
}

Point2 map_T2_inv(const Profile& profile, double x, double eta) {
  return {x, eta + profile.u_at(x) - 1.0};
}

}  // namespace memsfield

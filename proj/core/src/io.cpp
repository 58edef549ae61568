#include "memsfield/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace memsfield {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << content;
  if (!out) throw IoError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string profile_to_csv(const Profile& profile) {
  std::string out = "x,u\n";
  for (size_t i = 0; i < profile.x.size(); ++i)
    out += fmt_double(profile.x[i]) + "," + fmt_double(profile.u[i]) + "\n";
  return out;
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

}  // namespace

Profile profile_from_csv(const PhysicalParams& params,
                         const std::string& content) {
  std::istringstream in(content);
  std::string line;
  if (!std::getline(in, line) || split(line, ',') != std::vector<std::string>{"x", "u"})
    throw IoError("profile CSV: expected header 'x,u'");
  std::vector<double> xs, us;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto parts = split(line, ',');
    if (parts.size() != 2) throw IoError("profile CSV: malformed row '" + line + "'");
    try {
      xs.push_back(std::stod(parts[0]));
      us.push_back(std::stod(parts[1]));
    } catch (const std::exception&) {
      throw IoError("profile CSV: bad number in '" + line + "'");
    }
  }
  return Profile::from_samples(params, std::move(xs), std::move(us));
}

std::string mesh_to_csv(const LayeredMesh& mesh) {
  std::string out = "i,j,x,z,tag,layer,active\n";
  for (int i = 0; i <= mesh.Nx; ++i)
    for (int j = 0; j < mesh.rows(); ++j) {
      const int nd = mesh.node(i, j);
      // a node is active iff it belongs to at least one active cell
      bool act = false;
      for (int ci = std::max(0, i - 1); ci <= std::min(mesh.Nx - 1, i); ++ci)
        for (int cj = std::max(0, j - 1);
             cj <= std::min(mesh.N1 + mesh.N2 - 1, j); ++cj)
          act = act || mesh.active[mesh.cell(ci, cj)];
      out += std::to_string(i) + "," + std::to_string(j) + "," +
             fmt_double(mesh.xs[i]) + "," + fmt_double(mesh.zs[nd]) + "," +
             to_string(mesh.tags[nd]) + "," +
             (j <= mesh.N1 ? "lower" : "upper") + "," + (act ? "1" : "0") +
             "\n";
    }
  return out;
}

std::string fields_to_csv(const LayeredMesh& mesh, const Field& chi,
                          const Field& h, const Field& psi) {
  std::string out = "x,z,layer,chi,h,psi\n";
  for (int i = 0; i <= mesh.Nx; ++i)
    for (int j = 0; j < mesh.rows(); ++j) {
      const int nd = mesh.node(i, j);
      out += fmt_double(mesh.xs[i]) + "," + fmt_double(mesh.zs[nd]) + "," +
             (j <= mesh.N1 ? "1" : "2") + "," + fmt_double(chi.values[nd]) +
             "," + fmt_double(h.values[nd]) + "," +
             fmt_double(psi.values[nd]) + "\n";
    }
  return out;
}

std::vector<std::vector<double>> field_csv_rows(const std::string& content) {
  std::istringstream in(content);
  std::string line;
  if (!std::getline(in, line) || line != "x,z,layer,chi,h,psi")
    throw IoError("field CSV: bad header");
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto parts = split(line, ',');
    if (parts.size() != 6) throw IoError("field CSV: malformed row");
    std::vector<double> row;
    for (const auto& p : parts) row.push_back(std::stod(p));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string field_rows_to_csv(const std::vector<std::vector<double>>& rows) {
  std::string out = "x,z,layer,chi,h,psi\n";
  for (const auto& row : rows) {
    for (size_t k = 0; k < row.size(); ++k) {
      if (k == 2)
        out += std::to_string(static_cast<int>(row[k]));
      else
        out += fmt_double(row[k]);
      out += k + 1 == row.size() ? '\n' : ',';
    }
  }
  return out;
}

std::string report_to_json(const SolveReport& r) {
  nlohmann::json j;
  j["energy_psi"] = r.energy_psi;
  j["energy_h"] = r.energy_h;
  j["cg_iters"] = r.cg_iters;
  j["cg_residual"] = r.cg_residual;
  j["flux_jump_l2"] = r.flux_jump_l2;
  j["h1_norm_chi"] = r.h1_norm_chi;
  j["wall_time"] = r.wall_time;
  return j.dump(2) + "\n";
}

std::string identity_to_json(const IdentityReport& r) {
  nlohmann::json j;
  j["lhs"] = r.lhs;
  j["rhs_mixed"] = r.rhs_mixed;
  j["rhs_top"] = r.rhs_top;
  j["rhs_interface"] = r.rhs_interface;
  j["rhs_side"] = r.rhs_side;
  j["residual"] = r.residual;
  j["scale"] = r.scale;
  return j.dump(2) + "\n";
}

std::string admissibility_to_json(const Admissibility& adm) {
  nlohmann::json j;
  j["class"] = to_string(adm.cls);
  j["reasons"] = adm.reasons;
  auto runs = nlohmann::json::array();
  for (const auto& iv : adm.coincidence)
    runs.push_back({{"begin", iv.begin}, {"end", iv.end}});
  j["coincidence"] = runs;
  return j.dump(2) + "\n";
}

std::string study_to_csv(const StudyTable& table) {
  std::string out = "n,perturbation,e_h1,energy,trace_gap_p2,trace_gap_p4\n";
  for (const auto& r : table.records)
    out += std::to_string(r.n) + "," + fmt_double(r.perturbation) + "," +
           fmt_double(r.e_h1) + "," + fmt_double(r.energy) + "," +
           fmt_double(r.trace_gap_p2) + "," + fmt_double(r.trace_gap_p4) +
           "\n";
  return out;
}

std::string kappa_to_csv(const KappaStudy& study) {
  std::string out =
      "profile,level,h2_layer1,h2_layer2,excluded_fraction,excluded,reason\n";
  for (const auto& r : study.records)
    out += r.profile + "," + std::to_string(r.level) + "," +
           fmt_double(r.h2_layer1) + "," + fmt_double(r.h2_layer2) + "," +
           fmt_double(r.excluded_fraction) + "," +
           (r.excluded ? "1" : "0") + "," + r.reason + "\n";
  return out;
}

}  // namespace memsfield

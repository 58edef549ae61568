#pragma once

#include <string>
#include <vector>

#include "memsfield/diagnostics.hpp"
#include "memsfield/solver.hpp"

namespace memsfield {

/// 17-significant-digit float formatting; identical inputs give identical
/// bytes, and parsing the output recovers the exact double.
std::string fmt_double(double v);

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

/// Profile CSV, header `x,u`.
std::string profile_to_csv(const Profile& profile);
Profile profile_from_csv(const PhysicalParams& params,
                         const std::string& content);

/// Mesh dump CSV, header `i,j,x,z,tag,layer,active`.
std::string mesh_to_csv(const LayeredMesh& mesh);

/// Field CSV, header `x,z,layer,chi,h,psi`.
std::string fields_to_csv(const LayeredMesh& mesh, const Field& chi,
                          const Field& h, const Field& psi);
/// Parses a field CSV back into rows of doubles (round-trip support).
std::vector<std::vector<double>> field_csv_rows(const std::string& content);
std::string field_rows_to_csv(const std::vector<std::vector<double>>& rows);

std::string report_to_json(const SolveReport& report);
std::string identity_to_json(const IdentityReport& report);
std::string admissibility_to_json(const Admissibility& adm);
std::string study_to_csv(const StudyTable& table);
std::string kappa_to_csv(const KappaStudy& study);

}  // namespace memsfield

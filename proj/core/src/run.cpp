#include "memsfield/run.hpp"

#include <cmath>
#include <filesystem>

#include <json.hpp>

#include "memsfield/diagnostics.hpp"
#include "memsfield/io.hpp"

namespace memsfield {

Profile profile_from_config(const RunConfig& cfg) {
  if (!cfg.profile_csv.empty())
    return profile_from_csv(cfg.params, read_text_file(cfg.profile_csv));
  return Profile::builtin(cfg.params, cfg.profile_name, cfg.nx);
}

namespace {

namespace fs = std::filesystem;

std::string join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

int do_admissible(const RunConfig& cfg, std::ostream& diag) {
  const Profile prof = profile_from_config(cfg);
  const Admissibility adm = classify(prof, cfg.eps_sign, cfg.eps_touch);
  write_text_file(join(cfg.out_dir, "admissible.json"),
                  admissibility_to_json(adm));
  diag << "class: " << to_string(adm.cls) << "\n";
  if (adm.cls == AdmissClass::Inadmissible) {
    diag << "error: profile is inadmissible";
    for (const auto& r : adm.reasons) diag << "; " << r;
    diag << "\n";
    return kInadmissible;
  }
  return kOk;
}

SolveResult checked_solve(const RunConfig& cfg, const Profile& prof,
                          std::ostream& diag, int* rc) {
  const Admissibility adm = classify(prof, cfg.eps_sign, cfg.eps_touch);
  if (adm.cls == AdmissClass::Inadmissible) {
    diag << "error: profile is inadmissible\n";
    *rc = kInadmissible;
    return {};
  }
  *rc = kOk;
  return solve_problem(prof, cfg.n1, cfg.n2, cfg.cg_tol, cfg.max_iter);
}

int do_solve(const RunConfig& cfg, std::ostream& diag) {
  const Profile prof = profile_from_config(cfg);
  int rc = kOk;
  const SolveResult res = checked_solve(cfg, prof, diag, &rc);
  if (rc != kOk) return rc;
  write_text_file(join(cfg.out_dir, "field.csv"),
                  fields_to_csv(res.mesh, res.chi, res.h, res.psi));
  write_text_file(join(cfg.out_dir, "report.json"),
                  report_to_json(res.report));
  write_text_file(join(cfg.out_dir, "mesh.csv"), mesh_to_csv(res.mesh));
  return kOk;
}

int do_verify(const RunConfig& cfg, std::ostream& diag) {
  const Profile prof = profile_from_config(cfg);
  int rc = kOk;
  const SolveResult res = checked_solve(cfg, prof, diag, &rc);
  if (rc != kOk) return rc;

  nlohmann::json j;
  const double slack = 10.0 * cfg.cg_tol * res.report.energy_h;
  j["minimality"] = {
      {"energy_psi", res.report.energy_psi},
      {"energy_h", res.report.energy_h},
      {"pass", res.report.energy_psi <= res.report.energy_h + slack}};

  const PoincareCheck pc = poincare_check(res.chi, res.mesh, prof);
  j["poincare"] = {{"lhs", pc.lhs_norm},
                   {"bound", pc.bound},
                   {"pass", pc.lhs_norm <= pc.bound}};

  const FluxJumpResidual fj = flux_jump_residual(res.psi, res.mesh, prof);
  j["flux_jump"] = {{"l2", fj.l2},
                    {"linf", fj.linf},
                    {"pass", fj.l2 <= cfg.flux_tol}};

  const Admissibility adm = classify(prof, cfg.eps_sign, cfg.eps_touch);
  if (adm.coincidence.empty()) {
    const IdentityReport ir = identity_check(res.chi, res.mesh, prof);
    j["identity"] = {
        {"lhs", ir.lhs},
        {"rhs_mixed", ir.rhs_mixed},
        {"rhs_top", ir.rhs_top},
        {"rhs_interface", ir.rhs_interface},
        {"rhs_side", ir.rhs_side},
        {"residual", ir.residual},
        {"scale", ir.scale},
        {"pass", std::abs(ir.residual) <=
                     cfg.identity_rel_tol * ir.scale + cfg.identity_abs_tol}};
  } else {
    j["identity"] = {{"skipped", "non-empty coincidence set"}};
  }

  bool all = true;
  for (const auto& [k, v] : j.items())
    if (v.contains("pass") && !v["pass"].get<bool>()) all = false;
  j["all_pass"] = all;
  write_text_file(join(cfg.out_dir, "verify.json"), j.dump(2) + "\n");
  return kOk;
}

int do_refine(const RunConfig& cfg, std::ostream& diag) {
  if (!cfg.profile_csv.empty() || cfg.profile_name != "flat") {
    diag << "error: refine-study requires the flat builtin profile\n";
    return kMalformedInput;
  }
  const RefineStudy study = refine_study(cfg.params, cfg.levels, cfg.cg_tol);
  std::string csv = "level,h,l2_error,linf_error,energy\n";
  for (const auto& r : study.records)
    csv += std::to_string(r.level) + "," + fmt_double(r.h) + "," +
           fmt_double(r.l2_error) + "," + fmt_double(r.linf_error) + "," +
           fmt_double(r.energy) + "\n";
  write_text_file(join(cfg.out_dir, "refine.csv"), csv);
  nlohmann::json j;
  j["l2_order"] = study.l2_order;
  j["exact_regime"] = study.exact_regime;
  j["energy_exact"] = flat_energy_exact(cfg.params);
  write_text_file(join(cfg.out_dir, "refine.json"), j.dump(2) + "\n");
  return kOk;
}

int do_stability(const RunConfig& cfg, std::ostream& diag) {
  const Profile base = profile_from_config(cfg);
  const Profile dir = Profile::builtin(cfg.params, cfg.direction, base.nx());
  const StudyTable table =
      stability_study(base, dir.u, cfg.schedule, cfg.n1, cfg.n2, cfg.cg_tol);
  write_text_file(join(cfg.out_dir, "stability.csv"), study_to_csv(table));
  (void)diag;
  return kOk;
}

int do_kappa(const RunConfig& cfg, std::ostream& diag) {
  const KappaStudy study = kappa_family_study(
      cfg.params, cfg.profiles, cfg.kappa, cfg.levels, cfg.cg_tol);
  write_text_file(join(cfg.out_dir, "kappa.csv"), kappa_to_csv(study));
  nlohmann::json j;
  j["max_surrogate"] = study.max_surrogate;
  auto ratios = nlohmann::json::object();
  for (const auto& [name, ratio] : study.ratios) ratios[name] = ratio;
  j["ratios"] = ratios;
  write_text_file(join(cfg.out_dir, "kappa.json"), j.dump(2) + "\n");
  (void)diag;
  return kOk;
}

}  // namespace

int run_command(const std::string& command, const RunConfig& cfg,
                std::ostream& diag) {
  try {
    fs::create_directories(cfg.out_dir);
    if (command == "admissible") return do_admissible(cfg, diag);
    if (command == "solve") return do_solve(cfg, diag);
    if (command == "verify") return do_verify(cfg, diag);
    if (command == "refine-study") return do_refine(cfg, diag);
    if (command == "stability-study") return do_stability(cfg, diag);
    if (command == "kappa-study") return do_kappa(cfg, diag);
    diag << "error: unknown command '" << command << "'\n";
    return kMalformedInput;
  } catch (const SolverError& e) {
    diag << "error: " << e.what() << "\n";
    return kNoConvergence;
  } catch (const std::exception& e) {
    diag << "error: " << e.what() << "\n";
    return kMalformedInput;
  }
}

}  // namespace memsfield

// Command-line front end: moment tables, recurrence-coefficient analysis,
// factorization-class decisions, one-sided spectral factors, splitting
// verification, and stability certificates for torus weights.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bicircle/json_io.hpp"
#include "bicircle/recurrence.hpp"
#include "bicircle/stability.hpp"

namespace {

using bicircle::json;

struct QuadOpts {
  int initial = 64;
  int max = 4096;
  double tol = 1e-12;
  bicircle::QuadratureConfig config() const { return {initial, max, tol}; }
};

void add_quad_opts(CLI::App* cmd, QuadOpts& q) {
  cmd->add_option("--quad-initial", q.initial,
                  "Initial quadrature grid edge (rounded up to a power of 2)")
      ->capture_default_str();
  cmd->add_option("--quad-max", q.max, "Quadrature grid doubling cap")
      ->capture_default_str();
  cmd->add_option("--quad-tol", q.tol,
                  "Moment agreement tolerance between grid doublings")
      ->capture_default_str();
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path);
  if (!f) {
    throw bicircle::InvalidInput("cannot open \"" + out_path +
                                 "\" for writing");
  }
  f << text;
}

std::string pretty(const json& j) { return j.dump(2) + "\n"; }

int exit_code_for(const std::exception& e) {
  using namespace bicircle;
  if (dynamic_cast<const InvalidInput*>(&e) ||
      dynamic_cast<const LevelExceedsMoments*>(&e) ||
      dynamic_cast<const SupportExceeded*>(&e)) {
    return 2;
  }
  if (dynamic_cast<const NotConverged*>(&e)) return 3;
  if (dynamic_cast<const NotPositive*>(&e) ||
      dynamic_cast<const NotPositiveDefinite*>(&e)) {
    return 4;
  }
  if (dynamic_cast<const ConditionViolated*>(&e)) return 5;
  if (dynamic_cast<const VerificationFailed*>(&e) ||
      dynamic_cast<const CrossCheckFailed*>(&e) ||
      dynamic_cast<const NotIsometry*>(&e) ||
      dynamic_cast<const StructureUnattainable*>(&e) ||
      dynamic_cast<const RankOverflow*>(&e) ||
      dynamic_cast<const NullSpaceDegenerate*>(&e) ||
      dynamic_cast<const NotStableCase*>(&e) ||
      dynamic_cast<const DegenerateLeadingCoefficient*>(&e)) {
    return 6;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Orthonormal polynomial systems, recurrence coefficients, and "
      "spectral factorization for weights on the two-torus"};
  app.require_subcommand(1);
  int rc = 0;

  // ---- moments ---------------------------------------------------------
  auto* cmd_moments = app.add_subcommand(
      "moments", "Compute the moment table of a weight");
  std::string mo_weight, mo_out, mo_format = "json";
  std::vector<int> mo_order;
  QuadOpts mo_quad;
  cmd_moments->add_option("weight", mo_weight, "Weight description (JSON)")
      ->required();
  cmd_moments
      ->add_option("--order", mo_order,
                   "Maximal moment orders K L (|k| <= K, |l| <= L)")
      ->expected(2)
      ->required();
  cmd_moments->add_option("--format", mo_format, "Output format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  cmd_moments->add_option("--out", mo_out, "Output path (stdout if absent)");
  add_quad_opts(cmd_moments, mo_quad);
  cmd_moments->callback([&] {
    bicircle::WeightSpec w = bicircle::load_weight(mo_weight);
    bicircle::MomentTable t =
        bicircle::compute_moments(w, mo_order[0], mo_order[1],
                                  mo_quad.config());
    if (w.has_density() && !t.converged()) {
      std::cerr << "warning: quadrature not converged at grid "
                << t.grid_size() << "\n";
    }
    emit(mo_out, mo_format == "csv" ? bicircle::moments_to_csv(t)
                                    : pretty(bicircle::to_json(t)));
  });

  // ---- analyze ---------------------------------------------------------
  auto* cmd_analyze = app.add_subcommand(
      "analyze",
      "Recurrence coefficients, their consistency residuals, the "
      "factorization-class conditions, and a step-kernel scan");
  std::string an_weight, an_out, an_format = "json";
  std::vector<int> an_level, an_scan;
  double an_tol = 1e-8;
  QuadOpts an_quad;
  cmd_analyze->add_option("weight", an_weight, "Weight description (JSON)")
      ->required();
  cmd_analyze->add_option("--level", an_level, "Level n m (both >= 1)")
      ->expected(2)
      ->required();
  cmd_analyze->add_option("--tol", an_tol, "Vanishing threshold")
      ->capture_default_str();
  cmd_analyze
      ->add_option("--scan", an_scan,
                   "Scan window k_lo k_hi l_lo l_hi (default 1 n+3 1 m+3)")
      ->expected(4);
  cmd_analyze->add_option("--format", an_format,
                          "Output format: json, or csv (scan table only)")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  cmd_analyze->add_option("--out", an_out, "Output path (stdout if absent)");
  add_quad_opts(cmd_analyze, an_quad);
  cmd_analyze->callback([&] {
    const int n = an_level[0], m = an_level[1];
    if (n < 1 || m < 1) {
      throw bicircle::InvalidInput("analysis level requires n >= 1, m >= 1");
    }
    int k_lo = 1, k_hi = n + 3, l_lo = 1, l_hi = m + 3;
    if (!an_scan.empty()) {
      k_lo = an_scan[0];
      k_hi = an_scan[1];
      l_lo = an_scan[2];
      l_hi = an_scan[3];
    }
    bicircle::WeightSpec w = bicircle::load_weight(an_weight);
    bicircle::MomentTable t = bicircle::compute_moments(
        w, std::max(n + 1, k_hi), std::max(m + 1, l_hi), an_quad.config());
    bicircle::RecurrenceSet rs = bicircle::compute_coefficients(t, n, m);
    bicircle::EhatScan scan = bicircle::ehat_scan(t, k_lo, k_hi, l_lo, l_hi);
    if (an_format == "csv") {
      emit(an_out, bicircle::scan_to_csv(scan));
      return;
    }
    json out{{"level", {n, m}},
             {"moments",
              {{"grid_size", t.grid_size()}, {"converged", t.converged()}}},
             {"conditions",
              bicircle::to_json(bicircle::check_conditions(rs, an_tol))},
             {"coefficients", bicircle::to_json(rs)},
             {"recurrence_residuals",
              bicircle::to_json(bicircle::verify_recurrences(t, n, m))},
             {"identity_residuals",
              bicircle::to_json(bicircle::verify_identities(t, n, m))},
             {"scan", bicircle::to_json(scan)}};
    emit(an_out, pretty(out));
  });

  // ---- factor ----------------------------------------------------------
  auto* cmd_factor = app.add_subcommand(
      "factor", "Construct the one-sided stable factor of a weight");
  std::string fa_weight, fa_out;
  std::vector<int> fa_level;
  double fa_tol = 1e-8;
  int fa_grid = 128;
  bool fa_plot = false;
  QuadOpts fa_quad;
  cmd_factor->add_option("weight", fa_weight, "Weight description (JSON)")
      ->required();
  cmd_factor->add_option("--level", fa_level, "Level n m (both >= 1)")
      ->expected(2)
      ->required();
  cmd_factor->add_option("--tol", fa_tol, "Vanishing threshold")
      ->capture_default_str();
  cmd_factor
      ->add_option("--grid", fa_grid,
                   "Extra torus grid for the weight-product verification")
      ->capture_default_str();
  cmd_factor->add_option(
      "--out", fa_out,
      "Output base path; writes BASE.factor.json, BASE.work.json, "
      "BASE.conditions.json (stdout if absent)");
  cmd_factor->add_flag("--plot-data", fa_plot,
                       "Also write BASE.residuals.csv with the mixed-kernel "
                       "residual sequences");
  add_quad_opts(cmd_factor, fa_quad);
  cmd_factor->callback([&] {
    bicircle::WeightSpec w = bicircle::load_weight(fa_weight);
    bicircle::ConditionReport cond;
    bicircle::FactorResult res;
    try {
      res = bicircle::factor_one_sided(w, fa_level[0], fa_level[1], fa_tol,
                                       fa_quad.config(), &cond);
    } catch (const bicircle::ConditionViolated&) {
      // Still report which condition failed before the error exits.
      json cj = bicircle::to_json(cond);
      if (fa_out.empty()) {
        emit("", pretty(cj));
      } else {
        bicircle::save_json(fa_out + ".conditions.json", cj);
      }
      throw;
    }
    if (w.has_density() && fa_grid > 0) {
      res.verification.emplace_back(
          "weight_product_grid",
          bicircle::verify_factor_on_grid(res.p, w.reciprocal_density(),
                                          fa_grid));
    }
    if (fa_out.empty()) {
      json out{{"factor", bicircle::to_json(res)},
               {"work", bicircle::to_json(res.work)}};
      emit("", pretty(out));
    } else {
      bicircle::save_json(fa_out + ".factor.json", bicircle::to_json(res));
      bicircle::save_json(fa_out + ".work.json",
                          bicircle::to_json(res.work));
      bicircle::save_json(fa_out + ".conditions.json",
                          bicircle::to_json(res.conditions));
      if (fa_plot) {
        bicircle::ResidualReport plot;
        for (std::size_t i = 0; i < res.conditions.residuals_mixed.size();
             ++i) {
          plot.add("mixed_" + std::to_string(i),
                   res.conditions.residuals_mixed[i]);
        }
        for (std::size_t i = 0;
             i < res.conditions.residuals_mixed_rev.size(); ++i) {
          plot.add("mixed_rev_" + std::to_string(i),
                   res.conditions.residuals_mixed_rev[i]);
        }
        emit(fa_out + ".residuals.csv", bicircle::residuals_to_csv(plot));
      }
    }
  });

  // ---- verify-split ----------------------------------------------------
  auto* cmd_split = app.add_subcommand(
      "verify-split",
      "Verify that two candidate stable factors reproduce the orthonormal "
      "structure of a splitting-class weight");
  std::string vs_weight, vs_p, vs_q, vs_out;
  double vs_tol = 1e-7, vs_margin_tol = 1e-8;
  int vs_grid = 512;
  QuadOpts vs_quad;
  cmd_split->add_option("weight", vs_weight, "Weight description (JSON)")
      ->required();
  cmd_split->add_option("p", vs_p, "First factor p(z, w) (JSON polynomial)")
      ->required();
  cmd_split
      ->add_option("q", vs_q,
                   "Second factor q(z, w) (JSON polynomial; enters through "
                   "z -> 1/z)")
      ->required();
  cmd_split->add_option("--tol", vs_tol, "Residual pass threshold")
      ->capture_default_str();
  cmd_split
      ->add_option("--margin-tol", vs_margin_tol,
                   "Minimal acceptable stability margin")
      ->capture_default_str();
  cmd_split->add_option("--grid", vs_grid, "Stability sweep grid")
      ->capture_default_str();
  cmd_split->add_option("--out", vs_out, "Output path (stdout if absent)");
  add_quad_opts(cmd_split, vs_quad);
  cmd_split->callback([&] {
    bicircle::WeightSpec w = bicircle::load_weight(vs_weight);
    bicircle::LaurentPoly p =
        bicircle::poly_from_json(bicircle::load_json(vs_p));
    bicircle::LaurentPoly q =
        bicircle::poly_from_json(bicircle::load_json(vs_q));
    bicircle::ResidualReport rep = bicircle::verify_splitting_structure(
        w, p, q, vs_quad.config(), vs_grid);
    bool pass = true;
    for (const auto& [label, value] : rep.entries) {
      if (label.rfind("stability_margin", 0) == 0) {
        if (value <= vs_margin_tol) pass = false;
      } else if (value > vs_tol) {
        pass = false;
      }
    }
    json out = bicircle::to_json(rep);
    out["status"] = pass ? "pass" : "fail";
    emit(vs_out, pretty(out));
    if (!pass) rc = 6;
  });

  // ---- stability -------------------------------------------------------
  auto* cmd_stab = app.add_subcommand(
      "stability",
      "Classify where a polynomial can vanish relative to the closed "
      "bidisk");
  std::string st_poly, st_out;
  int st_grid = 512;
  double st_tol = 1e-8;
  cmd_stab->add_option("poly", st_poly, "Polynomial (JSON)")->required();
  cmd_stab->add_option("--grid", st_grid, "Sweep grid (circle samples)")
      ->capture_default_str();
  cmd_stab->add_option("--tol", st_tol, "Margin threshold")
      ->capture_default_str();
  cmd_stab->add_option("--out", st_out, "Output path (stdout if absent)");
  cmd_stab->callback([&] {
    bicircle::LaurentPoly p =
        bicircle::poly_from_json(bicircle::load_json(st_poly));
    bicircle::StabilityReport rep =
        bicircle::analyze_stability(p, st_grid, st_tol);
    emit(st_out, pretty(bicircle::to_json(rep)));
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const bicircle::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return rc;
}

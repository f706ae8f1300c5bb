#include "bicircle/json_io.hpp"

#include <fstream>
#include <sstream>

namespace bicircle {
namespace {

json cplx_to_json(cplx v) { return json::array({v.real(), v.imag()}); }

cplx cplx_from_json(const json& j) {
  if (j.is_number()) return cplx(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2) {
    return cplx(j.at(0).get<double>(), j.at(1).get<double>());
  }
  throw InvalidInput("a complex value must be a number or an [re, im] pair");
}

[[noreturn]] void rethrow_malformed(const nlohmann::json::exception& e) {
  throw InvalidInput(std::string("malformed document: ") + e.what());
}

}  // namespace

json matrix_to_json(const Eigen::MatrixXcd& M) {
  json data = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      data.push_back(cplx_to_json(M(i, j)));
    }
  }
  return json{{"rows", M.rows()}, {"cols", M.cols()}, {"data", data}};
}

Eigen::MatrixXcd matrix_from_json(const json& j) {
  try {
    const auto rows = j.at("rows").get<Eigen::Index>();
    const auto cols = j.at("cols").get<Eigen::Index>();
    const json& data = j.at("data");
    if (rows < 0 || cols < 0 ||
        data.size() != static_cast<std::size_t>(rows * cols)) {
      throw InvalidInput("matrix data length does not match its shape");
    }
    Eigen::MatrixXcd M(rows, cols);
    std::size_t pos = 0;
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (Eigen::Index c = 0; c < cols; ++c) {
        M(i, c) = cplx_from_json(data.at(pos++));
      }
    }
    return M;
  } catch (const nlohmann::json::exception& e) {
    rethrow_malformed(e);
  }
}

json to_json(const LaurentPoly& p) {
  json coeffs = json::array();
  for (cplx v : p.dense()) coeffs.push_back(cplx_to_json(v));
  return json{{"k_min", p.k_min()}, {"k_max", p.k_max()},
              {"l_min", p.l_min()}, {"l_max", p.l_max()},
              {"coeffs", coeffs}};
}

LaurentPoly poly_from_json(const json& j) {
  try {
    if (j.contains("terms")) {
      LaurentPoly p;
      for (const json& t : j.at("terms")) {
        if (!t.is_array() || t.size() < 3) {
          throw InvalidInput("a term must be [k, l, re] or [k, l, re, im]");
        }
        cplx v(t.at(2).get<double>(),
               t.size() > 3 ? t.at(3).get<double>() : 0.0);
        p.add_term(t.at(0).get<int>(), t.at(1).get<int>(), v);
      }
      return p;
    }
    std::vector<cplx> coeffs;
    for (const json& c : j.at("coeffs")) coeffs.push_back(cplx_from_json(c));
    return LaurentPoly::from_dense(j.at("k_min").get<int>(),
                                   j.at("k_max").get<int>(),
                                   j.at("l_min").get<int>(),
                                   j.at("l_max").get<int>(), coeffs);
  } catch (const nlohmann::json::exception& e) {
    rethrow_malformed(e);
  }
}

json to_json(const MomentTable& t) {
  json c = json::array();
  for (int l = 0; l <= t.max_l(); ++l) {
    cplx v = t.moment(0, l);
    c.push_back(json::array({0, l, v.real(), v.imag()}));
  }
  for (int k = 1; k <= t.max_k(); ++k) {
    for (int l = -t.max_l(); l <= t.max_l(); ++l) {
      cplx v = t.moment(k, l);
      c.push_back(json::array({k, l, v.real(), v.imag()}));
    }
  }
  return json{{"K", t.max_k()},
              {"L", t.max_l()},
              {"grid_size", t.grid_size()},
              {"converged", t.converged()},
              {"c", c}};
}

MomentTable moments_from_json(const json& j) {
  try {
    MomentTable t(j.at("K").get<int>(), j.at("L").get<int>());
    t.set_provenance(j.value("grid_size", 0), j.value("converged", true));
    for (const json& e : j.at("c")) {
      if (!e.is_array() || e.size() < 3) {
        throw InvalidInput("a moment entry must be [k, l, re] or "
                           "[k, l, re, im]");
      }
      int k = e.at(0).get<int>();
      int l = e.at(1).get<int>();
      cplx v(e.at(2).get<double>(),
             e.size() > 3 ? e.at(3).get<double>() : 0.0);
      if (k < 0 || (k == 0 && l < 0)) {
        t.set(-k, -l, std::conj(v));
      } else {
        t.set(k, l, v);
      }
    }
    return t;
  } catch (const nlohmann::json::exception& e) {
    rethrow_malformed(e);
  }
}

json to_json(const OrthoLevel& lev) {
  json pivots = json::array();
  for (Eigen::Index i = 0; i < lev.pivots.size(); ++i) {
    pivots.push_back(lev.pivots(i));
  }
  return json{{"n", lev.n},
              {"m", lev.m},
              {"ordering", lev.ordering == Ordering::lex ? "lex" : "revlex"},
              {"coeff_matrix", matrix_to_json(lev.coeffs)},
              {"pivots", pivots}};
}

json to_json(const ResidualReport& rep) {
  json entries = json::array();
  for (const auto& [label, value] : rep.entries) {
    entries.push_back(json{{"label", label}, {"residual", value}});
  }
  return json{{"max_residual", rep.max_residual()}, {"entries", entries}};
}

json to_json(const RecurrenceSet& rs) {
  return json{{"n", rs.n},
              {"m", rs.m},
              {"Ehat", matrix_to_json(rs.Ehat)},
              {"A", matrix_to_json(rs.A)},
              {"K", matrix_to_json(rs.K)},
              {"K1", matrix_to_json(rs.K1)},
              {"G", matrix_to_json(rs.G)},
              {"G1", matrix_to_json(rs.G1)},
              {"I", matrix_to_json(rs.I)},
              {"I1", matrix_to_json(rs.I1)},
              {"tEhat", matrix_to_json(rs.tEhat)},
              {"tA", matrix_to_json(rs.tA)},
              {"tK", matrix_to_json(rs.tK)},
              {"tK1", matrix_to_json(rs.tK1)},
              {"tG", matrix_to_json(rs.tG)},
              {"tG1", matrix_to_json(rs.tG1)},
              {"tI", matrix_to_json(rs.tI)},
              {"tI1", matrix_to_json(rs.tI1)}};
}

json to_json(const EhatScan& scan) {
  json rows = json::array();
  for (int k = scan.k_lo; k <= scan.k_hi; ++k) {
    for (int l = scan.l_lo; l <= scan.l_hi; ++l) {
      rows.push_back(json{{"k", k},
                          {"l", l},
                          {"ehat_norm", scan.ehat_norm(k - scan.k_lo,
                                                       l - scan.l_lo)},
                          {"ehat_tilde_norm",
                           scan.ehat_tilde_norm(k - scan.k_lo,
                                                l - scan.l_lo)}});
    }
  }
  return json{{"k_lo", scan.k_lo},
              {"k_hi", scan.k_hi},
              {"l_lo", scan.l_lo},
              {"l_hi", scan.l_hi},
              {"levels", rows}};
}

json to_json(const ConditionReport& rep) {
  return json{{"n", rep.n},
              {"m", rep.m},
              {"tol", rep.tol},
              {"scale", rep.scale},
              {"residuals_mixed", rep.residuals_mixed},
              {"residuals_mixed_rev", rep.residuals_mixed_rev},
              {"one_sided_z", rep.one_sided_z},
              {"one_sided_w", rep.one_sided_w},
              {"splitting", rep.splitting},
              {"stable", rep.stable},
              {"anti_stable", rep.anti_stable},
              {"tensor", rep.tensor}};
}

json to_json(const StabilityReport& rep) {
  return json{{"verdict", to_string(rep.verdict)},
              {"min_modulus", rep.min_modulus},
              {"grid", rep.grid},
              {"margin", rep.margin}};
}

json to_json(const FactorizationWork& work) {
  json diagnostics = json::array();
  for (const auto& [label, value] : work.diagnostics) {
    diagnostics.push_back(json{{"label", label}, {"value", value}});
  }
  return json{{"n", work.n},
              {"m", work.m},
              {"tol", work.tol},
              {"scale", work.scale},
              {"r", work.r},
              {"r1", work.r1},
              {"n1", work.n1},
              {"n2", work.n2},
              {"U", matrix_to_json(work.U)},
              {"U1", matrix_to_json(work.U1)},
              {"Ut", matrix_to_json(work.Ut)},
              {"S", matrix_to_json(work.S)},
              {"S1", matrix_to_json(work.S1)},
              {"G", matrix_to_json(work.G)},
              {"E", matrix_to_json(work.E)},
              {"Vt", matrix_to_json(work.Vt)},
              {"psit", to_json(work.psit)},
              {"diagnostics", diagnostics}};
}

json to_json(const FactorResult& res) {
  json verification = json::array();
  for (const auto& [label, value] : res.verification) {
    verification.push_back(json{{"label", label}, {"value", value}});
  }
  return json{{"p", to_json(res.p)},
              {"n", res.work.n},
              {"m", res.work.m},
              {"used_stable_shortcut", res.used_stable_shortcut},
              {"verification", verification},
              {"conditions", to_json(res.conditions)}};
}

WeightSpec weight_from_json(const json& j) {
  try {
    if (j.contains("weight")) {
      const std::string kind = j.at("weight").get<std::string>();
      if (kind == "reciprocal_mod_square") {
        return WeightSpec::mod_square(poly_from_json(j.at("polynomial")));
      }
      if (kind == "reciprocal_trig_poly") {
        return WeightSpec::trig_poly(poly_from_json(j.at("polynomial")));
      }
      if (kind == "explicit_moments") {
        return WeightSpec::explicit_moments(
            moments_from_json(j.at("moments")));
      }
      throw InvalidInput("unknown weight kind \"" + kind + "\"");
    }
    if (j.contains("c")) {
      return WeightSpec::explicit_moments(moments_from_json(j));
    }
    LaurentPoly p = poly_from_json(j);
    if (p.is_hermitian() && (p.k_min() < 0 || p.l_min() < 0)) {
      return WeightSpec::trig_poly(p);
    }
    return WeightSpec::mod_square(p);
  } catch (const nlohmann::json::exception& e) {
    rethrow_malformed(e);
  }
}

WeightSpec load_weight(const std::string& path) {
  return weight_from_json(load_json(path));
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open \"" + path + "\" for reading");
  try {
    return json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput("cannot parse \"" + path + "\": " + e.what());
  }
}

void save_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot open \"" + path + "\" for writing");
  out << j.dump(2) << "\n";
  if (!out) throw InvalidInput("failed while writing \"" + path + "\"");
}

std::string moments_to_csv(const MomentTable& t) {
  std::ostringstream os;
  os.precision(17);
  os << "k,l,re,im\n";
  auto row = [&](int k, int l) {
    cplx v = t.moment(k, l);
    os << k << "," << l << "," << v.real() << "," << v.imag() << "\n";
  };
  for (int l = 0; l <= t.max_l(); ++l) row(0, l);
  for (int k = 1; k <= t.max_k(); ++k) {
    for (int l = -t.max_l(); l <= t.max_l(); ++l) row(k, l);
  }
  return os.str();
}

std::string scan_to_csv(const EhatScan& scan) {
  std::ostringstream os;
  os.precision(17);
  os << "k,l,ehat_norm,ehat_tilde_norm\n";
  for (int k = scan.k_lo; k <= scan.k_hi; ++k) {
    for (int l = scan.l_lo; l <= scan.l_hi; ++l) {
      os << k << "," << l << "," << scan.ehat_norm(k - scan.k_lo, l - scan.l_lo)
         << "," << scan.ehat_tilde_norm(k - scan.k_lo, l - scan.l_lo) << "\n";
    }
  }
  return os.str();
}

std::string residuals_to_csv(const ResidualReport& rep) {
  std::ostringstream os;
  os.precision(17);
  os << "label,residual\n";
  for (const auto& [label, value] : rep.entries) {
    os << label << "," << value << "\n";
  }
  return os.str();
}

}  // namespace bicircle

#include "rmab/json_io.hpp"

#include <cmath>
#include <algorithm>
#include <filesystem>
#include <fstream>

#include "rmab/error.hpp"

namespace rmab {

namespace {

// NaN and infinities are not JSON.
Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json numbers(const std::vector<double>& v) {
  Json out = Json::array();
  for (double x : v) out.push_back(number(x));
  return out;
}

Json matrix(const Eigen::MatrixXd& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(number(m(i, j)));
    out.push_back(row);
  }
  return out;
}

template <class T>
Json optional_int(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

}  // namespace

Json instance_to_json(const Instance& inst) {
  const int n = inst.n_states();
  Json p = Json::array();
  Json r = Json::array();
  for (int s = 0; s < n; ++s) {
    Json ps = Json::array();
    for (int a = 0; a < 2; ++a) {
      Json row = Json::array();
      for (int t = 0; t < n; ++t) row.push_back(inst.p(s, a, t));
      ps.push_back(row);
    }
    p.push_back(ps);
    r.push_back(Json::array({inst.r(s, 0), inst.r(s, 1)}));
  }
  return Json{{"name", inst.name()}, {"n_states", n}, {"alpha", inst.alpha()}, {"P", p}, {"r", r}};
}

Instance instance_from_json(const Json& j) {
  try {
    const int n = j.at("n_states").get<int>();
    if (n < 1) throw Error(ErrorCode::kInvalidInstance, "n_states must be positive");
    const auto& p = j.at("P");
    const auto& r = j.at("r");
    if (!p.is_array() || static_cast<int>(p.size()) != n || !r.is_array() || static_cast<int>(r.size()) != n)
      throw Error(ErrorCode::kInvalidInstance, "P and r must have n_states entries");
    std::vector<double> tp, rw;
    tp.reserve(static_cast<std::size_t>(n) * 2 * n);
    for (int s = 0; s < n; ++s) {
      if (p[s].size() != 2 || r[s].size() != 2)
        throw Error(ErrorCode::kInvalidInstance, "state " + std::to_string(s) + " needs exactly two actions");
      for (int a = 0; a < 2; ++a) {
        if (static_cast<int>(p[s][a].size()) != n)
          throw Error(ErrorCode::kInvalidInstance,
                      "row (s=" + std::to_string(s) + ",a=" + std::to_string(a) + ") has wrong length");
        for (int t = 0; t < n; ++t) tp.push_back(p[s][a][t].get<double>());
        rw.push_back(r[s][a].get<double>());
      }
    }
    Instance inst(j.value("name", std::string("unnamed")), n, j.at("alpha").get<double>(), std::move(tp),
                  std::move(rw));
    require_valid(inst);
    return inst;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kInvalidInstance, std::string("malformed instance document: ") + e.what());
  }
}

Instance load_instance(const std::string& name_or_path) {
  const auto names = builtin_names();
  if (std::find(names.begin(), names.end(), name_or_path) != names.end()) return builtin(name_or_path);
  if (!std::filesystem::exists(name_or_path))
    throw Error(ErrorCode::kUnknownName, "'" + name_or_path + "' is neither a builtin nor a readable file");
  std::ifstream in(name_or_path);
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kInvalidInstance, name_or_path + ": " + e.what());
  }
  return instance_from_json(j);
}

Json lp_to_json(const LpSolution& lp) {
  Json mu = Json::array();
  for (Eigen::Index s = 0; s < lp.mu_star.size(); ++s) mu.push_back(number(lp.mu_star(s)));
  return Json{{"y", matrix(lp.y)},
              {"r_rel", number(lp.r_rel)},
              {"mu_star", mu},
              {"partition",
               {{"plus", lp.partition.plus},
                {"minus", lp.partition.minus},
                {"empty", lp.partition.empty},
                {"zero", lp.partition.zero}}},
              {"neutral_state", optional_int(lp.neutral_state)},
              {"degenerate", lp.degenerate},
              {"unique_optimum", to_string(lp.unique_optimum)}};
}

Json certificate_to_json(const Certificate& c) {
  auto pass = [](bool b) { return b ? "pass" : "fail"; };
  return Json{{"instance", c.instance},
              {"a1_aperiodic_unichain", pass(c.a1_aperiodic_unichain)},
              {"eig_p", numbers(c.eig_p)},
              {"a2_nondegenerate", pass(c.a2_nondegenerate)},
              {"neutral_state", optional_int(c.neutral_state)},
              {"a3_local_stability", pass(c.a3_local_stability)},
              {"eig_phi", numbers(c.eig_phi)},
              {"regular_unstable", to_string(c.regular_unstable)},
              {"unique_optimum", to_string(c.unique_optimum)},
              {"full_support", c.full_support},
              {"spectrum_condition", c.spectrum_condition},
              {"all_positive_p", c.all_positive_p},
              {"noise_constants", "not estimated"},
              {"eta_closed_form", c.eta_closed_form ? number(*c.eta_closed_form) : Json(nullptr)},
              {"eta_socp", c.eta_socp ? number(*c.eta_socp) : Json(nullptr)},
              {"lambda_w", c.lambda_w ? number(*c.lambda_w) : Json(nullptr)},
              {"lambda_u", c.lambda_u ? number(*c.lambda_u) : Json(nullptr)},
              {"notes", c.notes}};
}

Json stats_to_json(const TrajectoryStats& s) {
  Json j{{"instance", s.instance},
         {"policy", s.policy},
         {"N", s.n_arms},
         {"T", s.horizon},
         {"reps", s.replications},
         {"seed", s.seed},
         {"avg_reward", number(s.avg_reward)},
         {"ci_half", number(s.ci_half)},
         {"r_rel", number(s.r_rel)},
         {"gap_ratio", s.gap_defined ? number(s.gap_ratio) : Json(nullptr)},
         {"log_gap_ratio", s.gap_defined ? number(s.log_gap_ratio) : Json(nullptr)},
         {"above_relaxation", s.above_relaxation},
         {"replication_rewards", numbers(s.replication_rewards)}};
  if (s.has_diagnostics) {
    j["d_ic_avg"] = number(s.d_ic_avg);
    j["h_u_avg"] = number(s.h_u_avg);
    if (s.has_sets) {
      j["m_ol_avg"] = number(s.m_ol_avg);
      j["frac_ol_full"] = number(s.frac_ol_full);
    }
  }
  if (s.series) {
    Json series{{"d_ic", numbers(s.series->d_ic)}, {"h_u", numbers(s.series->h_u)}, {"m_ol", numbers(s.series->m_ol)}};
    Json full = Json::array();
    for (auto v : s.series->ol_full) full.push_back(static_cast<int>(v));
    series["ol_full"] = full;
    j["series"] = series;
  }
  return j;
}

}  // namespace rmab

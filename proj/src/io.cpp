#include "regret/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "regret/errors.hpp"
#include "regret/special.hpp"

namespace regret {

using nlohmann::json;

namespace {

std::string join_path(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError("config field `" + path + "`: " + what);
}

const json& require(const json& j, const std::string& path,
                    const std::string& key) {
  if (!j.is_object()) fail(path, "must be an object");
  const auto it = j.find(key);
  if (it == j.end()) fail(join_path(path, key), "is missing");
  return *it;
}

void check_keys(const json& j, const std::string& path,
                std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail(path, "must be an object");
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* k : allowed) {
      if (item.key() == k) {
        ok = true;
        break;
      }
    }
    if (!ok) fail(join_path(path, item.key()), "is not a recognized field");
  }
}

double as_double(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "must be a number");
  return j.get<double>();
}

int as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "must be an integer");
  return j.get<int>();
}

bool as_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path, "must be a boolean");
  return j.get<bool>();
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "must be a string");
  return j.get<std::string>();
}

Vec as_vec(const json& j, const std::string& path) {
  if (j.is_number()) {  // scalar shorthand for dimension 1
    return Vec::Constant(1, j.get<double>());
  }
  if (!j.is_array() || j.empty()) fail(path, "must be a nonempty array");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) fail(path, "entries must be numbers");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

std::vector<double> as_double_list(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "must be an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& e : j) {
    if (!e.is_number()) fail(path, "entries must be numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

Mat as_mat(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) {
    fail(path, "must be a nonempty array of row arrays");
  }
  const std::size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty()) {
    fail(path, "rows must be nonempty arrays");
  }
  const std::size_t cols = j[0].size();
  Mat m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) {
      fail(path, "rows must all have the same length");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      if (!j[r][c].is_number()) fail(path, "entries must be numbers");
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          j[r][c].get<double>();
    }
  }
  return m;
}

json vec_to_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json mat_to_json(const Mat& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json dlist_to_json(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(x);
  return a;
}

FamilyPtr parse_family(const json& j, const std::string& path) {
  check_keys(j, path, {"kind", "fixed_cov", "support", "theta_bounds"});
  const std::string kind = as_string(require(j, path, "kind"),
                                     join_path(path, "kind"));
  FamilyKind fk;
  try {
    fk = family_kind_from_name(kind);
  } catch (const DomainError& e) {
    fail(join_path(path, "kind"), e.what());
  }
  ParamFamily fam = [&]() {
    if (fk == FamilyKind::finite_discrete) {
      if (j.contains("fixed_cov")) {
        fail(join_path(path, "fixed_cov"),
             "does not apply to the finite-discrete kind");
      }
      const Mat support = as_mat(require(j, path, "support"),
                                 join_path(path, "support"));
      return ParamFamily::finite_discrete(support);
    }
    if (j.contains("support")) {
      fail(join_path(path, "support"), "applies only to finite-discrete");
    }
    const Mat cov = as_mat(require(j, path, "fixed_cov"),
                           join_path(path, "fixed_cov"));
    return fk == FamilyKind::gaussian_location
               ? ParamFamily::gaussian_location(cov)
               : ParamFamily::gaussian_full_mean(cov);
  }();
  if (j.contains("theta_bounds")) {
    const std::string bp = join_path(path, "theta_bounds");
    const json& tb = j["theta_bounds"];
    check_keys(tb, bp, {"lo", "hi"});
    fam.set_theta_box(as_vec(require(tb, bp, "lo"), join_path(bp, "lo")),
                      as_vec(require(tb, bp, "hi"), join_path(bp, "hi")));
  }
  return std::make_shared<const ParamFamily>(std::move(fam));
}

TrueDistribution parse_truth(const json& j, const std::string& path,
                             const FamilyPtr& family) {
  const std::string kind = as_string(require(j, path, "kind"),
                                     join_path(path, "kind"));
  if (kind == "in-family") {
    check_keys(j, path, {"kind", "theta0"});
    return TrueDistribution::in_family(
        family, as_vec(require(j, path, "theta0"), join_path(path, "theta0")));
  }
  if (kind == "gaussian-mixture") {
    check_keys(j, path, {"kind", "weights", "means", "cov"});
    const std::vector<double> w = as_double_list(
        require(j, path, "weights"), join_path(path, "weights"));
    const json& jm = require(j, path, "means");
    if (!jm.is_array() || jm.empty()) {
      fail(join_path(path, "means"), "must be a nonempty array of vectors");
    }
    std::vector<Vec> means;
    means.reserve(jm.size());
    for (std::size_t i = 0; i < jm.size(); ++i) {
      means.push_back(as_vec(jm[i], join_path(path, "means")));
    }
    const Mat cov = as_mat(require(j, path, "cov"), join_path(path, "cov"));
    return TrueDistribution::gaussian_mixture(w, means, cov);
  }
  if (kind == "empirical") {
    check_keys(j, path, {"kind", "rows"});
    return TrueDistribution::empirical(
        as_mat(require(j, path, "rows"), join_path(path, "rows")));
  }
  fail(join_path(path, "kind"),
       "must be one of in-family, gaussian-mixture, empirical");
}

CostModel parse_cost(const json& j, const std::string& path) {
  const std::string kind = as_string(require(j, path, "kind"),
                                     join_path(path, "kind"));
  CostModel m;
  if (kind == "newsvendor") {
    check_keys(j, path,
               {"kind", "h", "b", "smoothing", "lip", "curvature", "bound"});
    const Vec h = as_vec(require(j, path, "h"), join_path(path, "h"));
    const Vec b = as_vec(require(j, path, "b"), join_path(path, "b"));
    double s = 0.0;
    if (j.contains("smoothing")) {
      s = as_double(j["smoothing"], join_path(path, "smoothing"));
    }
    m = CostModel::newsvendor(h, b, s);
  } else if (kind == "portfolio") {
    check_keys(j, path,
               {"kind", "dim", "gamma", "lip", "curvature", "bound"});
    const int dim = as_int(require(j, path, "dim"), join_path(path, "dim"));
    const double g =
        as_double(require(j, path, "gamma"), join_path(path, "gamma"));
    m = CostModel::portfolio(dim, g);
  } else {
    fail(join_path(path, "kind"), "must be one of newsvendor, portfolio");
  }
  if (j.contains("lip")) m.lip = as_double(j["lip"], join_path(path, "lip"));
  if (j.contains("curvature")) {
    m.curvature = as_double(j["curvature"], join_path(path, "curvature"));
  }
  if (j.contains("bound")) {
    m.bound = as_double(j["bound"], join_path(path, "bound"));
  }
  return m;
}

void parse_solver(const json& j, const std::string& path, OracleOptions* o) {
  check_keys(j, path,
             {"omega_lo", "omega_hi", "grad_tol", "max_iter", "armijo_c",
              "interior_margin"});
  if (j.contains("omega_lo")) {
    o->omega_lo = as_vec(j["omega_lo"], join_path(path, "omega_lo"));
  }
  if (j.contains("omega_hi")) {
    o->omega_hi = as_vec(j["omega_hi"], join_path(path, "omega_hi"));
  }
  if (j.contains("grad_tol")) {
    o->grad_tol = as_double(j["grad_tol"], join_path(path, "grad_tol"));
  }
  if (j.contains("max_iter")) {
    o->max_iter = as_int(j["max_iter"], join_path(path, "max_iter"));
  }
  if (j.contains("armijo_c")) {
    o->armijo_c = as_double(j["armijo_c"], join_path(path, "armijo_c"));
  }
  if (j.contains("interior_margin")) {
    o->interior_margin =
        as_double(j["interior_margin"], join_path(path, "interior_margin"));
  }
}

void parse_quadrature(const json& j, const std::string& path, QuadSpec* q) {
  check_keys(j, path,
             {"gh_nodes", "gh_max_nodes", "rel_tol", "abs_tol",
              "panel_max_doublings", "tail_sigmas"});
  if (j.contains("gh_nodes")) {
    q->gh_nodes = as_int(j["gh_nodes"], join_path(path, "gh_nodes"));
  }
  if (j.contains("gh_max_nodes")) {
    q->gh_max_nodes = as_int(j["gh_max_nodes"], join_path(path, "gh_max_nodes"));
  }
  if (j.contains("rel_tol")) {
    q->rel_tol = as_double(j["rel_tol"], join_path(path, "rel_tol"));
  }
  if (j.contains("abs_tol")) {
    q->abs_tol = as_double(j["abs_tol"], join_path(path, "abs_tol"));
  }
  if (j.contains("panel_max_doublings")) {
    q->panel_max_doublings =
        as_int(j["panel_max_doublings"], join_path(path, "panel_max_doublings"));
  }
  if (j.contains("tail_sigmas")) {
    q->tail_sigmas = as_double(j["tail_sigmas"], join_path(path, "tail_sigmas"));
  }
}

void parse_experiment(const json& j, const std::string& path,
                      ExperimentConfig* e) {
  check_keys(j, path,
             {"n_list", "replications", "t_grid", "base_seed", "threads",
              "keep_raw", "fail_frac_limit"});
  if (j.contains("n_list")) {
    const json& jn = j["n_list"];
    if (!jn.is_array() || jn.empty()) {
      fail(join_path(path, "n_list"), "must be a nonempty array");
    }
    e->n_list.clear();
    for (const auto& v : jn) {
      if (!v.is_number_integer()) {
        fail(join_path(path, "n_list"), "entries must be integers");
      }
      e->n_list.push_back(v.get<int>());
    }
  }
  if (j.contains("replications")) {
    e->replications = as_int(j["replications"], join_path(path, "replications"));
  }
  if (j.contains("t_grid")) {
    e->t_grid = as_double_list(j["t_grid"], join_path(path, "t_grid"));
  }
  if (j.contains("base_seed")) {
    const json& js = j["base_seed"];
    if (!js.is_number_integer() && !js.is_number_unsigned()) {
      fail(join_path(path, "base_seed"), "must be an integer");
    }
    e->base_seed = js.get<std::uint64_t>();
  }
  if (j.contains("threads")) {
    e->threads = as_int(j["threads"], join_path(path, "threads"));
  }
  if (j.contains("keep_raw")) {
    e->keep_raw = as_bool(j["keep_raw"], join_path(path, "keep_raw"));
  }
  if (j.contains("fail_frac_limit")) {
    e->fail_frac_limit =
        as_double(j["fail_frac_limit"], join_path(path, "fail_frac_limit"));
  }
}

void parse_bounds(const json& j, const std::string& path, BoundsSpec* b) {
  check_keys(j, path,
             {"n", "t", "epsilon", "g_eto", "g_ieo", "upper_budget",
              "delta_threshold", "b0_threshold", "gg_factor", "genbound"});
  if (j.contains("n")) b->n = as_double(j["n"], join_path(path, "n"));
  if (j.contains("t")) {
    const json& jt = j["t"];
    if (jt.is_number()) {
      b->t_list = {jt.get<double>()};
    } else {
      b->t_list = as_double_list(jt, join_path(path, "t"));
    }
  }
  if (j.contains("epsilon")) {
    b->epsilon = as_double(j["epsilon"], join_path(path, "epsilon"));
  }
  if (j.contains("g_eto")) {
    b->lower_budget.g_eto = as_double(j["g_eto"], join_path(path, "g_eto"));
  }
  if (j.contains("g_ieo")) {
    b->lower_budget.g_ieo = as_double(j["g_ieo"], join_path(path, "g_ieo"));
  }
  if (j.contains("upper_budget")) {
    b->upper_budget = as_double(j["upper_budget"], join_path(path, "upper_budget"));
  }
  if (j.contains("delta_threshold")) {
    b->delta_threshold =
        as_double(j["delta_threshold"], join_path(path, "delta_threshold"));
  }
  if (j.contains("b0_threshold")) {
    b->b0_threshold =
        as_double(j["b0_threshold"], join_path(path, "b0_threshold"));
  }
  if (j.contains("gg_factor")) {
    b->gg_factor = as_double(j["gg_factor"], join_path(path, "gg_factor"));
  }
  if (j.contains("genbound")) {
    const std::string gp = join_path(path, "genbound");
    const json& jg = j["genbound"];
    check_keys(jg, gp,
               {"lip", "curvature", "bound", "d_theta", "e_theta", "c_abs",
                "q", "n", "confidence"});
    GenBoundInputs g;
    g.lip = as_double(require(jg, gp, "lip"), join_path(gp, "lip"));
    g.curvature =
        as_double(require(jg, gp, "curvature"), join_path(gp, "curvature"));
    g.bound = as_double(require(jg, gp, "bound"), join_path(gp, "bound"));
    g.d_theta =
        as_double(require(jg, gp, "d_theta"), join_path(gp, "d_theta"));
    g.e_theta =
        as_double(require(jg, gp, "e_theta"), join_path(gp, "e_theta"));
    g.c_abs = as_double(require(jg, gp, "c_abs"), join_path(gp, "c_abs"));
    g.q = as_int(require(jg, gp, "q"), join_path(gp, "q"));
    g.n = as_double(require(jg, gp, "n"), join_path(gp, "n"));
    g.confidence =
        as_double(require(jg, gp, "confidence"), join_path(gp, "confidence"));
    b->genbound = g;
    b->have_genbound = true;
  }
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: JSON parse error: ") + e.what());
  }
  check_keys(j, "",
             {"schema_version", "instance", "experiment", "bounds", "solver",
              "quadrature"});
  RunConfig cfg;
  cfg.raw_text = text;
  cfg.content_hash = fnv1a64(text.data(), text.size());
  cfg.schema_version =
      as_int(require(j, "", "schema_version"), "schema_version");
  if (cfg.schema_version != 1) {
    fail("schema_version", "only version 1 is supported");
  }

  const json& ji = require(j, "", "instance");
  check_keys(ji, "instance", {"family", "true_distribution", "cost_model"});
  Instance& inst = cfg.experiment.instance;
  inst.family = parse_family(require(ji, "instance", "family"),
                             "instance.family");
  inst.truth = parse_truth(require(ji, "instance", "true_distribution"),
                           "instance.true_distribution", inst.family);
  inst.cost = parse_cost(require(ji, "instance", "cost_model"),
                         "instance.cost_model");
  if (j.contains("solver")) parse_solver(j["solver"], "solver", &inst.oracle);
  if (j.contains("quadrature")) {
    parse_quadrature(j["quadrature"], "quadrature", &inst.quad);
  }
  try {
    inst.validate();
  } catch (const DomainError& e) {
    throw ConfigError(std::string("config field `instance`: ") + e.what());
  }
  if (j.contains("experiment")) {
    parse_experiment(j["experiment"], "experiment", &cfg.experiment);
  }
  if (j.contains("bounds")) parse_bounds(j["bounds"], "bounds", &cfg.bounds);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  return parse_config(read_text_file(path));
}

std::string summary_to_json(const AsymptoticSummary& s) {
  json j;
  j["schema_version"] = 1;
  j["q"] = s.q;
  j["family_kind"] = s.family_kind;
  j["true_kind"] = s.true_kind;
  j["cost_kind"] = s.cost_kind;
  j["theta_kl"] = vec_to_json(s.theta_kl);
  j["theta_star"] = vec_to_json(s.theta_star);
  j["omega_at_kl"] = vec_to_json(s.omega_at_kl);
  j["omega_at_star"] = vec_to_json(s.omega_at_star);
  j["omega_opt"] = vec_to_json(s.omega_opt);
  j["v0_at_kl"] = s.v0_at_kl;
  j["v0_at_star"] = s.v0_at_star;
  j["v0_opt"] = s.v0_opt;
  j["kappa0_eto"] = s.kappa0_eto;
  j["kappa0_ieo"] = s.kappa0_ieo;
  j["delta"] = s.delta;
  j["grad_v0_at_kl"] = vec_to_json(s.grad_v0_at_kl);
  j["grad_v0_kl_norm"] = s.grad_v0_kl_norm;
  j["hess_v0_at_kl"] = mat_to_json(s.hess_v0_at_kl);
  j["hess_v0_at_star"] = mat_to_json(s.hess_v0_at_star);
  j["l1_hat_at_kl"] = s.l1_hat_at_kl;
  j["l1_hat_at_star"] = s.l1_hat_at_star;
  j["h_log"] = mat_to_json(s.h_log);
  j["v_score"] = mat_to_json(s.v_score);
  j["m1_eto"] = mat_to_json(s.m1_eto);
  j["var_grad_c"] = mat_to_json(s.var_grad_c);
  j["m1_ieo"] = mat_to_json(s.m1_ieo);
  j["h_log_tilde"] = mat_to_json(s.h_log_tilde);
  j["v_score_tilde"] = mat_to_json(s.v_score_tilde);
  j["m1_eto_tilde"] = mat_to_json(s.m1_eto_tilde);
  j["hess_v0_tilde"] = mat_to_json(s.hess_v0_tilde);
  j["var_grad_c_tilde"] = mat_to_json(s.var_grad_c_tilde);
  j["m1_ieo_tilde"] = mat_to_json(s.m1_ieo_tilde);
  j["lambda_eto"] = dlist_to_json(s.lambda_eto);
  j["lambda_ieo"] = dlist_to_json(s.lambda_ieo);
  j["eto_signed"] = s.eto_signed;
  j["tau1"] = s.tau1;
  j["tau2"] = s.tau2;
  j["tau3"] = s.tau3;
  j["tau3_kl_variant"] = s.tau3_kl_variant;
  j["tau6"] = s.tau6;
  j["b0"] = s.b0;
  j["b0_gaps"] = json::array();
  for (double g : s.b0_gaps) j["b0_gaps"].push_back(g);
  return j.dump(2) + "\n";
}

AsymptoticSummary summary_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("summary: JSON parse error: ") + e.what());
  }
  auto need = [&](const char* key) -> const json& {
    const auto it = j.find(key);
    if (it == j.end()) {
      throw ConfigError(std::string("summary field `") + key + "` is missing");
    }
    return *it;
  };
  AsymptoticSummary s;
  if (need("schema_version").get<int>() != 1) {
    throw ConfigError("summary: only schema_version 1 is supported");
  }
  s.q = need("q").get<int>();
  s.family_kind = need("family_kind").get<std::string>();
  s.true_kind = need("true_kind").get<std::string>();
  s.cost_kind = need("cost_kind").get<std::string>();
  s.theta_kl = as_vec(need("theta_kl"), "theta_kl");
  s.theta_star = as_vec(need("theta_star"), "theta_star");
  s.omega_at_kl = as_vec(need("omega_at_kl"), "omega_at_kl");
  s.omega_at_star = as_vec(need("omega_at_star"), "omega_at_star");
  s.omega_opt = as_vec(need("omega_opt"), "omega_opt");
  s.v0_at_kl = need("v0_at_kl").get<double>();
  s.v0_at_star = need("v0_at_star").get<double>();
  s.v0_opt = need("v0_opt").get<double>();
  s.kappa0_eto = need("kappa0_eto").get<double>();
  s.kappa0_ieo = need("kappa0_ieo").get<double>();
  s.delta = need("delta").get<double>();
  s.grad_v0_at_kl = as_vec(need("grad_v0_at_kl"), "grad_v0_at_kl");
  s.grad_v0_kl_norm = need("grad_v0_kl_norm").get<double>();
  s.hess_v0_at_kl = as_mat(need("hess_v0_at_kl"), "hess_v0_at_kl");
  s.hess_v0_at_star = as_mat(need("hess_v0_at_star"), "hess_v0_at_star");
  s.l1_hat_at_kl = need("l1_hat_at_kl").get<double>();
  s.l1_hat_at_star = need("l1_hat_at_star").get<double>();
  s.h_log = as_mat(need("h_log"), "h_log");
  s.v_score = as_mat(need("v_score"), "v_score");
  s.m1_eto = as_mat(need("m1_eto"), "m1_eto");
  s.var_grad_c = as_mat(need("var_grad_c"), "var_grad_c");
  s.m1_ieo = as_mat(need("m1_ieo"), "m1_ieo");
  s.h_log_tilde = as_mat(need("h_log_tilde"), "h_log_tilde");
  s.v_score_tilde = as_mat(need("v_score_tilde"), "v_score_tilde");
  s.m1_eto_tilde = as_mat(need("m1_eto_tilde"), "m1_eto_tilde");
  s.hess_v0_tilde = as_mat(need("hess_v0_tilde"), "hess_v0_tilde");
  s.var_grad_c_tilde = as_mat(need("var_grad_c_tilde"), "var_grad_c_tilde");
  s.m1_ieo_tilde = as_mat(need("m1_ieo_tilde"), "m1_ieo_tilde");
  s.lambda_eto = as_double_list(need("lambda_eto"), "lambda_eto");
  s.lambda_ieo = as_double_list(need("lambda_ieo"), "lambda_ieo");
  s.eto_signed = need("eto_signed").get<bool>();
  s.tau1 = need("tau1").get<double>();
  s.tau2 = need("tau2").get<double>();
  s.tau3 = need("tau3").get<double>();
  s.tau3_kl_variant = need("tau3_kl_variant").get<double>();
  s.tau6 = need("tau6").get<double>();
  s.b0 = need("b0").get<double>();
  const std::vector<double> gaps = as_double_list(need("b0_gaps"), "b0_gaps");
  if (gaps.size() != s.b0_gaps.size()) {
    throw ConfigError("summary: b0_gaps must have exactly 5 entries");
  }
  std::copy(gaps.begin(), gaps.end(), s.b0_gaps.begin());
  return s;
}

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string hash_hex(std::uint64_t h) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

std::string curves_to_csv(const TailCurve& eto, const TailCurve& ieo) {
  const DiffCurve diff = diff_curve(eto, ieo);
  std::ostringstream os;
  os << "t,p_eto,ci_eto,p_ieo,ci_ieo,d,ci_d\n";
  for (std::size_t k = 0; k < diff.t_grid.size(); ++k) {
    os << format_g17(diff.t_grid[k]) << ',' << format_g17(eto.probs[k]) << ','
       << format_g17(eto.ci_halfwidth[k]) << ',' << format_g17(ieo.probs[k])
       << ',' << format_g17(ieo.ci_halfwidth[k]) << ','
       << format_g17(diff.d[k]) << ',' << format_g17(diff.ci_halfwidth[k])
       << '\n';
  }
  return os.str();
}

namespace {

json curve_to_json_obj(const TailCurve& c, bool keep_raw) {
  json j;
  j["method"] = c.method;
  j["n"] = c.n;
  j["t_grid"] = dlist_to_json(c.t_grid);
  j["probs"] = dlist_to_json(c.probs);
  j["ci_halfwidth"] = dlist_to_json(c.ci_halfwidth);
  j["replications_total"] = c.replications_total;
  j["replications_used"] = c.replications_used;
  j["failures"] = c.failures;
  j["base_seed"] = c.base_seed;
  j["t_grid_rule"] = c.t_grid_rule;
  j["crn_note"] = c.crn_note;
  if (!c.first_failure.empty()) j["first_failure"] = c.first_failure;
  if (keep_raw) j["raw_regrets"] = dlist_to_json(c.raw_regrets);
  return j;
}

}  // namespace

std::string pair_to_json(const CurvePair& pair, const DiffCurve& diff,
                         bool keep_raw) {
  json j;
  j["schema_version"] = 1;
  j["n"] = pair.eto.n;
  j["eto"] = curve_to_json_obj(pair.eto, keep_raw);
  j["ieo"] = curve_to_json_obj(pair.ieo, keep_raw);
  json jd;
  jd["t_grid"] = dlist_to_json(diff.t_grid);
  jd["d"] = dlist_to_json(diff.d);
  jd["ci_halfwidth"] = dlist_to_json(diff.ci_halfwidth);
  jd["crn_note"] = diff.crn_note;
  j["diff"] = jd;
  return j.dump(2) + "\n";
}

std::string scaling_to_json(const ScalingReport& rep) {
  json j;
  j["schema_version"] = 1;
  j["n_list"] = json::array();
  for (int n : rep.ns) j["n_list"].push_back(n);
  j["ks_ieo"] = dlist_to_json(rep.ks_ieo);
  j["ks_ieo_decreasing"] = rep.ks_ieo_decreasing;
  j["ks_eto"] = dlist_to_json(rep.ks_eto);
  j["eto_check_skipped"] = rep.eto_check_skipped;
  if (rep.eto_check_skipped) j["eto_skip_reason"] = rep.eto_skip_reason;
  j["median_abs_dev_ieo"] = dlist_to_json(rep.median_ieo);
  j["median_abs_dev_eto"] = dlist_to_json(rep.median_eto);
  j["slope_ieo"] = rep.slope_ieo;
  j["slope_eto"] = rep.slope_eto;
  j["note"] = rep.note;
  return j.dump(2) + "\n";
}

std::string manifest_to_json(const RunManifest& m) {
  json j;
  j["schema_version"] = 1;
  j["tool_version"] = m.tool_version;
  j["command"] = m.command;
  j["config_path"] = m.config_path;
  j["config_hash"] = m.config_hash_hex;
  j["out_dir"] = m.out_dir;
  j["status"] = m.status;
  j["phases"] = json::array();
  for (const ManifestPhase& p : m.phases) {
    json jp;
    jp["name"] = p.name;
    jp["seconds"] = p.seconds;
    jp["status"] = p.status;
    j["phases"].push_back(jp);
  }
  j["outputs"] = json::array();
  for (const std::string& o : m.outputs) j["outputs"].push_back(o);
  j["notes"] = json::array();
  for (const std::string& n : m.notes) j["notes"].push_back(n);
  try {
    j["config_echo"] = json::parse(m.config_echo);
  } catch (const json::parse_error&) {
    j["config_echo"] = m.config_echo;  // echo verbatim if not valid JSON
  }
  return j.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open for writing: " + path);
  out.write(content.data(),
            static_cast<std::streamsize>(content.size()));
  if (!out) throw ConfigError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace regret

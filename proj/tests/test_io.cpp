#include <doctest.h>

#include <cmath>
#include <memory>
#include <string>

#include "regret/errors.hpp"
#include "regret/io.hpp"

using namespace regret;

namespace {

Vec vec1(double x) {
  Vec v(1);
  v << x;
  return v;
}

const char* kMinimalConfig = R"json({
  "schema_version": 1,
  "instance": {
    "family": {"kind": "gaussian-location", "fixed_cov": [[1.0]]},
    "true_distribution": {"kind": "in-family", "theta0": [0.0]},
    "cost_model": {"kind": "newsvendor", "h": [1.0], "b": [1.0]}
  }
})json";

std::string source_path(const std::string& rel) {
  return std::string(REGRET_SOURCE_DIR) + "/" + rel;
}

}  // namespace

TEST_CASE("minimal config parses with defaults filled in") {
  const RunConfig cfg = parse_config(kMinimalConfig);
  CHECK(cfg.schema_version == 1);
  CHECK(cfg.experiment.instance.family->kind() ==
        FamilyKind::gaussian_location);
  CHECK(cfg.experiment.instance.truth.kind() == TrueKind::in_family);
  CHECK(cfg.experiment.instance.cost.kind == CostKind::newsvendor);
  // Experiment defaults.
  CHECK(cfg.experiment.n_list == std::vector<int>{250, 1000, 4000});
  CHECK(cfg.experiment.replications == 2000);
  CHECK(cfg.experiment.base_seed == 20240915);
  CHECK(cfg.experiment.threads == 1);
  CHECK(cfg.experiment.fail_frac_limit == 0.01);
  // Bounds defaults.
  CHECK(cfg.bounds.n == 1000.0);
  CHECK(cfg.bounds.t_list.empty());
  CHECK(cfg.bounds.delta_threshold == 1e-6);
  CHECK(cfg.bounds.b0_threshold == 1e-6);
  CHECK(cfg.bounds.gg_factor == 10.0);
  CHECK_FALSE(cfg.bounds.have_genbound);
  // Raw text and its hash are preserved for the manifest.
  CHECK(cfg.raw_text == kMinimalConfig);
  CHECK(cfg.content_hash != 0);
}

TEST_CASE("example configs in the repository parse") {
  const RunConfig ws = load_config(source_path("examples/wellspec.json"));
  CHECK(ws.experiment.instance.cost.kind == CostKind::newsvendor);
  CHECK(ws.bounds.have_genbound);
  CHECK(ws.bounds.genbound.q == 1);
  const RunConfig mis = load_config(source_path("examples/misspec.json"));
  CHECK(mis.experiment.instance.truth.kind() == TrueKind::gaussian_mixture);
  CHECK(mis.bounds.n == 4000.0);
  const RunConfig smoke =
      load_config(source_path("tests/configs/smoke.json"));
  CHECK(smoke.experiment.n_list == std::vector<int>{100});
  CHECK(smoke.experiment.replications == 100);
}

TEST_CASE("config errors name the dotted field path") {
  // Missing cost model.
  const char* no_cost = R"json({
    "schema_version": 1,
    "instance": {
      "family": {"kind": "gaussian-location", "fixed_cov": [[1.0]]},
      "true_distribution": {"kind": "in-family", "theta0": [0.0]}
    }
  })json";
  CHECK_THROWS_WITH_AS(parse_config(no_cost),
                       doctest::Contains("instance.cost_model"), ConfigError);

  // Unknown keys are rejected, not ignored.
  const std::string with_typo = std::string(kMinimalConfig).substr(
      0, std::string(kMinimalConfig).rfind('}')) +
      ", \"experimnet\": {}}";
  CHECK_THROWS_WITH_AS(parse_config(with_typo),
                       doctest::Contains("experimnet"), ConfigError);

  // Wrong schema version.
  std::string v2 = kMinimalConfig;
  v2.replace(v2.find("\"schema_version\": 1"), 19, "\"schema_version\": 2");
  CHECK_THROWS_AS(parse_config(v2), ConfigError);

  // Malformed JSON.
  CHECK_THROWS_AS(parse_config("{ not json"), ConfigError);

  // Unknown family kind mentions the path.
  std::string bad_kind = kMinimalConfig;
  bad_kind.replace(bad_kind.find("gaussian-location"), 17, "gamma-location");
  CHECK_THROWS_AS(parse_config(bad_kind), ConfigError);

  // A file that does not exist.
  CHECK_THROWS_AS(load_config("/nonexistent/path/config.json"), ConfigError);
}

TEST_CASE("scalar shorthand: numbers accepted where 1-vectors are expected") {
  const char* scalar = R"json({
    "schema_version": 1,
    "instance": {
      "family": {"kind": "gaussian-location", "fixed_cov": [[1.0]]},
      "true_distribution": {"kind": "in-family", "theta0": 0.25},
      "cost_model": {"kind": "newsvendor", "h": 1.0, "b": 3.0}
    },
    "bounds": {"t": 0.5}
  })json";
  const RunConfig cfg = parse_config(scalar);
  CHECK(cfg.experiment.instance.truth.theta0()(0) == 0.25);
  CHECK(cfg.experiment.instance.cost.b(0) == 3.0);
  CHECK(cfg.bounds.t_list == std::vector<double>{0.5});
}

TEST_CASE("summary json round trip preserves every double bit-for-bit") {
  Mat cov(1, 1);
  cov << 1.0;
  Instance inst;
  inst.family = std::make_shared<const ParamFamily>(
      ParamFamily::gaussian_location(cov));
  inst.truth = TrueDistribution::gaussian_mixture(
      {0.5, 0.5}, {vec1(-2.0), vec1(2.0)}, cov);
  inst.cost = CostModel::newsvendor(vec1(1.0), vec1(3.0));
  const AsymptoticSummary s = compute_summary(inst);
  const std::string json = summary_to_json(s);
  const AsymptoticSummary r = summary_from_json(json);

  CHECK(r.q == s.q);
  CHECK(r.theta_kl(0) == s.theta_kl(0));
  CHECK(r.theta_star(0) == s.theta_star(0));
  CHECK(r.kappa0_eto == s.kappa0_eto);
  CHECK(r.kappa0_ieo == s.kappa0_ieo);
  CHECK(r.delta == s.delta);
  CHECK(r.grad_v0_kl_norm == s.grad_v0_kl_norm);
  CHECK(r.m1_eto(0, 0) == s.m1_eto(0, 0));
  CHECK(r.m1_ieo(0, 0) == s.m1_ieo(0, 0));
  CHECK(r.m1_ieo_tilde(0, 0) == s.m1_ieo_tilde(0, 0));
  CHECK(r.hess_v0_tilde(0, 0) == s.hess_v0_tilde(0, 0));
  CHECK(r.lambda_eto == s.lambda_eto);
  CHECK(r.lambda_ieo == s.lambda_ieo);
  CHECK(r.tau1 == s.tau1);
  CHECK(r.tau3_kl_variant == s.tau3_kl_variant);
  CHECK(r.tau6 == s.tau6);
  CHECK(r.b0 == s.b0);
  CHECK(r.b0_gaps == s.b0_gaps);
  CHECK(r.l1_hat_at_star == s.l1_hat_at_star);
  CHECK(r.eto_signed == s.eto_signed);
  CHECK(r.family_kind == s.family_kind);
  CHECK(r.true_kind == s.true_kind);
  CHECK(r.cost_kind == s.cost_kind);

  // Malformed summaries are rejected.
  CHECK_THROWS_AS(summary_from_json("{}"), ConfigError);
  CHECK_THROWS_AS(summary_from_json("not json"), ConfigError);
}

TEST_CASE("curve csv: exact header, one row per threshold, g17 numbers") {
  TailCurve eto, ieo;
  eto.method = "eto";
  ieo.method = "ieo";
  eto.n = ieo.n = 100;
  eto.t_grid = ieo.t_grid = {0.0, 0.1};
  eto.probs = {1.0, 0.25};
  ieo.probs = {1.0, 0.125};
  eto.ci_halfwidth = {0.0, 0.1};
  ieo.ci_halfwidth = {0.0, 0.2};
  const std::string csv = curves_to_csv(eto, ieo);
  // Header byte-exact, as promised to downstream parsers.
  CHECK(csv.rfind("t,p_eto,ci_eto,p_ieo,ci_ieo,d,ci_d\n", 0) == 0);
  // One data row per grid point.
  std::size_t rows = 0;
  for (char c : csv) rows += (c == '\n');
  CHECK(rows == 3);
  // The difference column is the coupled difference.
  CHECK(csv.find("0.125") != std::string::npos);
  CHECK(csv.find("0.22360679774997") != std::string::npos);  // hypot ci
}

TEST_CASE("format helpers round trip") {
  for (double v : {0.1, 1.0 / 3.0, 2.000079361411793, -1e-17, 0.0}) {
    const std::string s = format_g17(v);
    CHECK(std::stod(s) == v);
  }
  CHECK(hash_hex(0x1234abcdULL) == "000000001234abcd");
  CHECK(hash_hex(0xffffffffffffffffULL) == "ffffffffffffffff");
}

TEST_CASE("manifest json carries provenance and parses back") {
  RunManifest m;
  m.tool_version = "0.1.0";
  m.command = "simulate";
  m.config_path = "cfg.json";
  m.config_hash_hex = "00000000deadbeef";
  m.out_dir = "out";
  m.status = "complete";
  m.phases.push_back({"summary", 0.25, "complete"});
  m.outputs.push_back("out/tail_100.csv");
  m.config_echo = kMinimalConfig;
  m.notes.push_back("a note");
  const std::string json = manifest_to_json(m);
  CHECK(json.find("\"command\"") != std::string::npos);
  CHECK(json.find("simulate") != std::string::npos);
  CHECK(json.find("00000000deadbeef") != std::string::npos);
  CHECK(json.find("tail_100.csv") != std::string::npos);
  // The echoed config is embedded as JSON, not as an escaped string.
  CHECK(json.find("\"schema_version\"") != std::string::npos);
}

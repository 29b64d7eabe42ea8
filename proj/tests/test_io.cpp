#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>

#include "wassreg/errors.hpp"
#include "wassreg/io.hpp"
#include "wassreg/simulate.hpp"
#include "wassreg/special.hpp"

using namespace wassreg;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path("/tmp/wassreg_test_" + name) {}
  ~TempFile() { std::remove(path.c_str()); }
};

std::vector<DistributionQ> some_distributions(const GridPtr& grid, int n) {
  SimConfig cfg;
  cfg.scase = SimCase::TGauss;
  cfg.n = n;
  cfg.seed = 77;
  return generate_d2d(cfg, grid).predictors;
}

}  // namespace

TEST_CASE("wide csv round-trips exactly") {
  const GridPtr grid = ProbGrid::midpoint(50);
  const auto ds = some_distributions(grid, 4);
  const std::vector<std::string> ids{"a", "b", "c", "d"};
  std::stringstream buf;
  write_wide_csv(buf, ids, ds);
  const WideData back = read_wide_csv(buf, grid);
  REQUIRE(back.distributions.size() == 4);
  CHECK(back.unit_ids == ids);
  for (int i = 0; i < 4; ++i) CHECK(back.distributions[i].qvals() == ds[i].qvals());
}

TEST_CASE("long csv groups by unit in order of first appearance") {
  std::stringstream in("unit_id,value\nu2,1.0\nu1,3.5\nu2,2.0\nu1,0.5\n");
  const LongData data = read_long_csv(in);
  REQUIRE(data.unit_ids.size() == 2);
  CHECK(data.unit_ids[0] == "u2");
  CHECK(data.samples[0].values.size() == 2);
  CHECK(data.samples[1].values.size() == 2);
  const auto ds = to_distributions(data, ProbGrid::midpoint(20));
  CHECK(ds.size() == 2);
}

TEST_CASE("malformed csv raises input errors with the offending line") {
  std::stringstream bad_header("id,value\nu1,1.0\n");
  CHECK_THROWS_AS(read_long_csv(bad_header), InputError);
  std::stringstream bad_cell("unit_id,value\nu1,not-a-number\n");
  CHECK_THROWS_AS(read_long_csv(bad_cell), InputError);
  std::stringstream empty("");
  CHECK_THROWS_AS(read_wide_csv(empty), InputError);
}

TEST_CASE("tidy density of the uniform is flat at one") {
  const GridPtr grid = ProbGrid::midpoint(200);
  const DistributionQ unif(grid, grid->points());
  std::stringstream buf;
  write_tidy_density(buf, {"u"}, {unif});
  std::string line;
  std::getline(buf, line);
  CHECK(line == "unit_id,x,fval");
  int rows = 0;
  while (std::getline(buf, line)) {
    const auto last = line.rfind(',');
    CHECK(std::stod(line.substr(last + 1)) == doctest::Approx(1.0).epsilon(1e-9));
    ++rows;
  }
  CHECK(rows == 200);
}

TEST_CASE("tidy density of a normal matches the density along the interior") {
  const GridPtr grid = ProbGrid::midpoint(1000);
  Eigen::VectorXd q(grid->size());
  for (int k = 0; k < grid->size(); ++k) q[k] = norm_quantile(grid->points()[k]);
  std::stringstream buf;
  write_tidy_density(buf, {"n"}, {DistributionQ(grid, std::move(q))});
  std::string line;
  std::getline(buf, line);
  while (std::getline(buf, line)) {
    const auto c1 = line.find(',');
    const auto c2 = line.rfind(',');
    const double x = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
    const double f = std::stod(line.substr(c2 + 1));
    if (std::abs(x) < 1.6)  // p roughly in [0.05, 0.95]
      CHECK(std::abs(f - norm_pdf(x)) < 1e-3);
  }
}

TEST_CASE("tidy density skips flat stretches (atoms)") {
  const GridPtr grid = ProbGrid::midpoint(100);
  const DistributionQ atom(grid, Eigen::VectorXd::Constant(100, 0.5));
  std::stringstream buf;
  write_tidy_density(buf, {"a"}, {atom});
  std::string line;
  std::getline(buf, line);
  CHECK_FALSE(std::getline(buf, line));  // header only
}

TEST_CASE("tidy prediction rows carry the eta column") {
  const GridPtr grid = ProbGrid::midpoint(10);
  const auto ds = some_distributions(grid, 2);
  std::stringstream buf;
  write_tidy_predictions(buf, {"x", "y"}, ds, {1.0, 0.25});
  std::string line;
  std::getline(buf, line);
  CHECK(line == "unit_id,p,qval,eta");
  int rows = 0;
  while (std::getline(buf, line)) {
    ++rows;
    if (rows > 10) CHECK(line.substr(line.rfind(',') + 1) == "0.25");
  }
  CHECK(rows == 20);
}

TEST_CASE("scalar csv round trip") {
  std::stringstream buf;
  write_scalar_csv(buf, {"u1", "u2"}, {1.5, -2.25});
  std::vector<std::string> ids;
  const auto vals = read_scalar_csv(buf, &ids);
  CHECK(ids == std::vector<std::string>{"u1", "u2"});
  CHECK(vals == std::vector<double>{1.5, -2.25});
}

TEST_CASE("distribution JSON round trip") {
  const GridPtr grid = ProbGrid::midpoint(30);
  const auto ds = some_distributions(grid, 1);
  const std::string j = distribution_to_json(ds[0]);
  CHECK(j.find("\"grid_m\":30") != std::string::npos);
  const DistributionQ back = distribution_from_json(j);
  CHECK(back.qvals() == ds[0].qvals());
  CHECK_THROWS_AS(distribution_from_json("{"), InputError);
  const std::string t = tangent_to_json(log_map(ds[0], ds[0]));
  CHECK(t.find("\"vals\"") != std::string::npos);
}

TEST_CASE("config hash is the 64-bit FNV-1a hex digest") {
  CHECK(config_hash("") == "cbf29ce484222325");
  CHECK(config_hash("a") == "af63dc4c8601ec8c");
  CHECK(config_hash("abc") != config_hash("abd"));
}

TEST_CASE("d2d model save/load preserves predictions") {
  const GridPtr grid = ProbGrid::midpoint(100);
  SimConfig cfg;
  cfg.scase = SimCase::TGauss;
  cfg.n = 20;
  cfg.seed = 88;
  const D2DSample s = generate_d2d(cfg, grid);
  const D2DFit fit = fit_d2d(s.predictors, s.responses, TruncationChoice::fve(0.9));
  TempFile f("d2d.json");
  save_d2d_model(f.path, fit, 88, "test-config");
  const D2DFit back = load_d2d_model(f.path);
  CHECK(back.trunc_j == fit.trunc_j);
  CHECK(back.trunc_k == fit.trunc_k);
  CHECK(back.coeff == fit.coeff);
  const auto [p1, e1] = predict_d2d(fit, s.predictors[3]);
  const auto [p2, e2] = predict_d2d(back, s.predictors[3]);
  CHECK(p1.qvals() == p2.qvals());
  CHECK(e1 == e2);
}

TEST_CASE("d2s and ar model envelopes round trip") {
  const GridPtr grid = ProbGrid::midpoint(100);
  SimConfig cfg;
  cfg.scase = SimCase::D2SGauss;
  cfg.n = 25;
  cfg.seed = 89;
  const D2SSample s = generate_d2s(cfg, grid);
  const ScalarFit fit = fit_d2s(s.predictors, s.y, TruncationChoice::fve(0.9));
  TempFile f1("d2s.json");
  save_d2s_model(f1.path, fit, 89, "cfg");
  const ScalarFit back = load_d2s_model(f1.path);
  CHECK(predict_d2s(back, s.predictors[0]) == predict_d2s(fit, s.predictors[0]));

  const ARProcessSpec spec = ARProcessSpec::default_spec(grid);
  const auto series = simulate_ar_process(spec, 60, 9);
  ARFitOptions opts;
  opts.trunc = TruncationChoice::fve(0.9);
  const ARFit ar = fit_ar(series, opts);
  TempFile f2("ar.json");
  save_ar_model(f2.path, ar, 9, "cfg");
  const ARFit ar_back = load_ar_model(f2.path);
  const auto [fa, ea] = forecast_one(ar, series.back());
  const auto [fb, eb] = forecast_one(ar_back, series.back());
  CHECK(fa.qvals() == fb.qvals());
  CHECK(ea == eb);
}

TEST_CASE("model kind mismatch is rejected on load") {
  const GridPtr grid = ProbGrid::midpoint(100);
  SimConfig cfg;
  cfg.scase = SimCase::TGauss;
  cfg.n = 12;
  cfg.seed = 90;
  const D2DSample s = generate_d2d(cfg, grid);
  const D2DFit fit = fit_d2d(s.predictors, s.responses, TruncationChoice::fve(0.9));
  TempFile f("kind.json");
  save_d2d_model(f.path, fit, 1, "cfg");
  CHECK_THROWS_AS(load_ar_model(f.path), InputError);
}

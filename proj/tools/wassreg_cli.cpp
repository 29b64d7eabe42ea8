#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wassreg/d2d.hpp"
#include "wassreg/d2s.hpp"
#include "wassreg/errors.hpp"
#include "wassreg/io.hpp"
#include "wassreg/simulate.hpp"
#include "wassreg/war.hpp"

using namespace wassreg;

namespace {

struct CommonOpts {
  int grid_m = 1000;
  std::uint64_t seed = 1;
  int threads = 0;
  std::string trunc = "cv:5";
  std::string format = "long";  // long-samples or wide-quantiles
};

int default_threads() {
  if (const char* env = std::getenv("WASSREG_THREADS")) {
    try {
      return std::max(0, std::stoi(env));
    } catch (const std::exception&) {
      throw invalid_input("WASSREG_THREADS is not an integer");
    }
  }
  return 0;
}

TruncationChoice parse_trunc(const std::string& s, std::uint64_t seed) {
  const auto colon = s.find(':');
  const std::string head = s.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : s.substr(colon + 1);
  try {
    if (head == "fve") return TruncationChoice::fve(rest.empty() ? 0.95 : std::stod(rest));
    if (head == "cv") return TruncationChoice::cv(rest.empty() ? 5 : std::stoi(rest), seed);
    if (head == "fixed") {
      const auto comma = rest.find(',');
      if (comma == std::string::npos) throw std::invalid_argument(rest);
      return TruncationChoice::fixed(std::stoi(rest.substr(0, comma)),
                                     std::stoi(rest.substr(comma + 1)));
    }
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    throw invalid_input("cannot parse truncation spec: " + s);
  }
  throw invalid_input("unknown truncation method in: " + s +
                      " (expected fve:<thr>, cv:<folds>, or fixed:<J>,<K>)");
}

std::vector<DistributionQ> ingest(const std::string& path, const std::string& format,
                                  const GridPtr& grid, std::vector<std::string>* ids) {
  if (format == "long") {
    const LongData data = read_long_csv_file(path);
    if (ids) *ids = data.unit_ids;
    return to_distributions(data, grid);
  }
  if (format == "wide") {
    WideData data = read_wide_csv_file(path, grid);
    if (ids) *ids = data.unit_ids;
    return std::move(data.distributions);
  }
  throw invalid_input("unknown format '" + format + "' (expected long or wide)");
}

void write_file(const std::string& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream out(path);
  if (!out) throw invalid_input("cannot write file: " + path);
  body(out);
}

std::string config_string(const CommonOpts& c, const std::string& sub) {
  std::ostringstream os;
  os << sub << "|grid=" << c.grid_m << "|seed=" << c.seed << "|trunc=" << c.trunc
     << "|format=" << c.format;
  return os.str();
}

void add_common(CLI::App* app, CommonOpts& c) {
  app->add_option("--grid-m,--grid", c.grid_m, "grid size M")->check(CLI::Range(16, 1 << 20));
  app->add_option("--seed", c.seed, "random seed");
  app->add_option("--threads", c.threads, "worker threads (0 = hardware)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wasserstein-space regression for one-dimensional distributions"};
  app.require_subcommand(1);
  app.set_config("--config");

  CommonOpts c;
  c.threads = default_threads();

  // fit-d2d
  auto* fit_d2d_cmd = app.add_subcommand("fit-d2d", "fit distribution-to-distribution regression");
  std::string x_path, y_path, out_path;
  fit_d2d_cmd->add_option("--x", x_path, "predictor CSV")->required()->check(CLI::ExistingFile);
  fit_d2d_cmd->add_option("--y", y_path, "response CSV")->required()->check(CLI::ExistingFile);
  fit_d2d_cmd->add_option("--out", out_path, "output model JSON")->required();
  fit_d2d_cmd->add_option("--trunc", c.trunc, "fve:<thr> | cv:<folds> | fixed:<J>,<K>");
  fit_d2d_cmd->add_option("--format", c.format, "input format: long | wide");
  add_common(fit_d2d_cmd, c);

  // predict
  auto* predict_cmd = app.add_subcommand("predict", "predict responses from a d2d model");
  std::string model_path, tidy_path, density_path;
  predict_cmd->add_option("--model", model_path, "model JSON")->required()->check(CLI::ExistingFile);
  predict_cmd->add_option("--x", x_path, "new predictor CSV")->required()->check(CLI::ExistingFile);
  predict_cmd->add_option("--out", out_path, "predictions, tidy unit_id,p,qval,eta CSV")->required();
  predict_cmd->add_option("--wide", tidy_path, "optional wide quantile emission");
  predict_cmd->add_option("--density", density_path, "density companion emission");
  predict_cmd->add_option("--format", c.format, "input format: long | wide");
  add_common(predict_cmd, c);

  // fit-d2s
  auto* fit_d2s_cmd = app.add_subcommand("fit-d2s", "fit distribution-to-scalar regression");
  fit_d2s_cmd->add_option("--x", x_path, "predictor CSV")->required()->check(CLI::ExistingFile);
  fit_d2s_cmd->add_option("--y", y_path, "scalar response CSV")->required()->check(CLI::ExistingFile);
  fit_d2s_cmd->add_option("--out", out_path, "output model JSON")->required();
  fit_d2s_cmd->add_option("--trunc", c.trunc, "fve:<thr> | cv:<folds> | fixed:<J>,<K>");
  fit_d2s_cmd->add_option("--format", c.format, "input format: long | wide");
  add_common(fit_d2s_cmd, c);

  // predict-d2s
  auto* predict_d2s_cmd = app.add_subcommand("predict-d2s", "predict scalars from a d2s model");
  predict_d2s_cmd->add_option("--model", model_path, "model JSON")->required()->check(CLI::ExistingFile);
  predict_d2s_cmd->add_option("--x", x_path, "new predictor CSV")->required()->check(CLI::ExistingFile);
  predict_d2s_cmd->add_option("--out", out_path, "predictions, unit_id,value CSV")->required();
  predict_d2s_cmd->add_option("--format", c.format, "input format: long | wide");
  add_common(predict_d2s_cmd, c);

  // fit-ar
  auto* fit_ar_cmd = app.add_subcommand("fit-ar", "fit autoregressive distribution series model");
  double train_frac = 0.8;
  fit_ar_cmd->add_option("--series", x_path, "series CSV, rows in time order")
      ->required()->check(CLI::ExistingFile);
  fit_ar_cmd->add_option("--out", out_path, "output model JSON")->required();
  fit_ar_cmd->add_option("--trunc", c.trunc, "fve:<thr> | cv:<folds> | fixed:<J>,<J>");
  fit_ar_cmd->add_option("--split,--train-frac", train_frac, "chronological split for selection");
  fit_ar_cmd->add_option("--format", c.format, "input format: long | wide");
  add_common(fit_ar_cmd, c);

  // forecast
  auto* forecast_cmd = app.add_subcommand("forecast", "roll an AR model forward");
  int horizon = 1;
  std::string start_path;
  forecast_cmd->add_option("--model", model_path, "model JSON")->required()->check(CLI::ExistingFile);
  forecast_cmd->add_option("--horizon", horizon, "steps ahead")->check(CLI::PositiveNumber);
  forecast_cmd->add_option("--start", start_path, "wide CSV with one row to start from (default: last training element)")
      ->check(CLI::ExistingFile);
  forecast_cmd->add_option("--out", out_path, "forecast quantiles, wide CSV")->required();
  add_common(forecast_cmd, c);

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "generate synthetic data");
  std::string case_name = "tgauss";
  int n = 100, m_samples = 0;
  bool powerlaw = false;
  std::string out_x, out_y, out_oracle;
  sim_cmd->add_option("--case", case_name,
                      "tgauss | beta | gauss-linear | gauss-quadratic | d2s-gauss | d2s-beta");
  sim_cmd->add_option("--n", n, "number of units")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--m", m_samples, "samples per unit (0 = exact quantiles)");
  sim_cmd->add_flag("--powerlaw", powerlaw, "power-law score decay with tangent noise");
  int sim_replicates = 0;
  sim_cmd->add_option("--replicates", sim_replicates,
                      "run a replicated fit-and-evaluate study instead of dumping one draw");
  sim_cmd->add_option("--out", out_path, "study output: one row per replicate (awd, eta_rate)");
  sim_cmd->add_option("--trunc", c.trunc, "truncation used by the study fits");
  sim_cmd->add_option("--out-x", out_x, "predictor output, wide CSV");
  sim_cmd->add_option("--out-y", out_y, "response output (wide CSV, or unit_id,value for d2s cases)");
  sim_cmd->add_option("--out-oracle", out_oracle, "conditional-mean oracle output");
  add_common(sim_cmd, c);

  // convergence
  auto* conv_cmd = app.add_subcommand("convergence", "operator estimation error versus sample size");
  std::vector<int> ns{20, 100, 500};
  int replicates = 500, fixed_j = 5, fixed_k = 5;
  conv_cmd->add_option("--case", case_name, "tgauss | beta");
  conv_cmd->add_option("--ns", ns, "sample sizes");
  conv_cmd->add_option("--replicates", replicates, "Monte Carlo replicates")->check(CLI::PositiveNumber);
  conv_cmd->add_option("--j", fixed_j, "fixed predictor rank")->check(CLI::PositiveNumber);
  conv_cmd->add_option("--k", fixed_k, "fixed response rank")->check(CLI::PositiveNumber);
  conv_cmd->add_option("--out", out_path, "per-size results CSV")->required();
  add_common(conv_cmd, c);

  // wdist
  auto* wdist_cmd = app.add_subcommand("wdist", "pairwise Wasserstein distance matrix");
  wdist_cmd->add_option("--x", x_path, "input CSV")->required()->check(CLI::ExistingFile);
  wdist_cmd->add_option("--out", out_path, "distance matrix CSV")->required();
  wdist_cmd->add_option("--format", c.format, "input format: long | wide");
  add_common(wdist_cmd, c);

  CLI11_PARSE(app, argc, argv);

  try {
    const GridPtr grid = ProbGrid::midpoint(c.grid_m);

    if (*fit_d2d_cmd) {
      const auto xs = ingest(x_path, c.format, grid, nullptr);
      const auto ys = ingest(y_path, c.format, grid, nullptr);
      const D2DFit fit = fit_d2d(xs, ys, parse_trunc(c.trunc, c.seed));
      save_d2d_model(out_path, fit, c.seed, config_string(c, "fit-d2d"));
      std::cout << "fit-d2d: n=" << xs.size() << " J=" << fit.trunc_j
                << " K=" << fit.trunc_k << " eta_events=" << fit.eta_events() << "\n";
    } else if (*predict_cmd) {
      const D2DFit fit = load_d2d_model(model_path);
      std::vector<std::string> ids;
      const auto xs = ingest(x_path, c.format, fit.predictor_mean.mean.grid(), &ids);
      std::vector<DistributionQ> preds;
      std::vector<double> etas;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        auto [d, eta] = predict_d2d(fit, xs[i]);
        preds.push_back(std::move(d));
        etas.push_back(eta);
        if (eta < 1.0)
          std::cout << "note: boundary projection applied to unit " << ids[i]
                    << " (eta=" << eta << ")\n";
      }
      write_file(out_path,
                 [&](std::ostream& o) { write_tidy_predictions(o, ids, preds, etas); });
      if (!tidy_path.empty())
        write_file(tidy_path, [&](std::ostream& o) { write_wide_csv(o, ids, preds); });
      if (!density_path.empty())
        write_file(density_path, [&](std::ostream& o) { write_tidy_density(o, ids, preds); });
    } else if (*fit_d2s_cmd) {
      const auto xs = ingest(x_path, c.format, grid, nullptr);
      std::ifstream yin(y_path);
      if (!yin) throw invalid_input("cannot open file: " + y_path);
      const auto ys = read_scalar_csv(yin);
      const ScalarFit fit = fit_d2s(xs, ys, parse_trunc(c.trunc, c.seed));
      save_d2s_model(out_path, fit, c.seed, config_string(c, "fit-d2s"));
      std::cout << "fit-d2s: n=" << xs.size() << " J=" << fit.trunc_j << "\n";
    } else if (*predict_d2s_cmd) {
      const ScalarFit fit = load_d2s_model(model_path);
      std::vector<std::string> ids;
      const auto xs = ingest(x_path, c.format, fit.predictor_mean.mean.grid(), &ids);
      std::vector<double> preds;
      for (const auto& x : xs) preds.push_back(predict_d2s(fit, x));
      write_file(out_path, [&](std::ostream& o) { write_scalar_csv(o, ids, preds); });
    } else if (*fit_ar_cmd) {
      const auto series = ingest(x_path, c.format, grid, nullptr);
      ARFitOptions opts;
      opts.train_fraction = train_frac;
      opts.trunc = parse_trunc(c.trunc, c.seed);
      const ARFit fit = fit_ar(series, opts);
      save_ar_model(out_path, fit, c.seed, config_string(c, "fit-ar"));
      std::cout << "fit-ar: n=" << series.size() << " J=" << fit.trunc_j
                << " holdout_error=" << fit.test_error << "\n";
    } else if (*forecast_cmd) {
      const ARFit fit = load_ar_model(model_path);
      DistributionQ start = fit.last;
      if (!start_path.empty()) {
        WideData w = read_wide_csv_file(start_path, fit.mean.mean.grid());
        if (w.distributions.size() != 1)
          throw invalid_input("start file must hold exactly one row");
        start = w.distributions[0];
      }
      const RollingForecast rf = forecast_rolling(fit, start, horizon);
      std::vector<std::string> ids;
      for (int h = 1; h <= horizon; ++h) ids.push_back("h" + std::to_string(h));
      write_file(out_path, [&](std::ostream& o) { write_wide_csv(o, ids, rf.steps); });
    } else if (*sim_cmd) {
      SimConfig cfg;
      cfg.scase = parse_sim_case(case_name);
      cfg.n = n;
      cfg.seed = c.seed;
      cfg.m_samples = m_samples;
      cfg.powerlaw = powerlaw;
      if (sim_replicates > 0) {
        if (out_path.empty()) throw invalid_input("--replicates needs --out for the study CSV");
        if (cfg.scase == SimCase::D2SGauss || cfg.scase == SimCase::D2SBeta)
          throw invalid_input("replicated studies cover the distribution-response cases only");
        StudyConfig study;
        study.sim = cfg;
        study.trunc = parse_trunc(c.trunc, c.seed);
        study.replicates = sim_replicates;
        study.threads = c.threads;
        const auto results = run_d2d_study(study, grid);
        write_file(out_path, [&](std::ostream& o) {
          o << "replicate,awd,eta_rate\n";
          for (std::size_t r = 0; r < results.size(); ++r)
            o << r + 1 << "," << results[r].awd << "," << results[r].eta_rate << "\n";
        });
        std::vector<double> awds;
        for (const auto& r : results) awds.push_back(r.awd);
        std::cout << "simulate: replicates=" << results.size()
                  << " median_awd=" << median(awds) << "\n";
        return 0;
      }
      if (out_x.empty() || out_y.empty())
        throw invalid_input("data dump needs --out-x and --out-y (or use --replicates)");
      std::vector<std::string> ids;
      for (int i = 1; i <= n; ++i) ids.push_back("u" + std::to_string(i));
      if (cfg.scase == SimCase::D2SGauss || cfg.scase == SimCase::D2SBeta) {
        const D2SSample s = generate_d2s(cfg, grid);
        write_file(out_x, [&](std::ostream& o) { write_wide_csv(o, ids, s.predictors); });
        write_file(out_y, [&](std::ostream& o) { write_scalar_csv(o, ids, s.y); });
        if (!out_oracle.empty())
          write_file(out_oracle,
                     [&](std::ostream& o) { write_scalar_csv(o, ids, s.oracle_mean); });
      } else {
        const D2DSample s = generate_d2d(cfg, grid);
        write_file(out_x, [&](std::ostream& o) { write_wide_csv(o, ids, s.predictors); });
        write_file(out_y, [&](std::ostream& o) { write_wide_csv(o, ids, s.responses); });
        if (!out_oracle.empty())
          write_file(out_oracle,
                     [&](std::ostream& o) { write_wide_csv(o, ids, s.oracle); });
      }
    } else if (*conv_cmd) {
      StudyConfig cfg;
      cfg.sim.scase = parse_sim_case(case_name);
      cfg.sim.seed = c.seed;
      cfg.sim.powerlaw = true;
      cfg.trunc = TruncationChoice::fixed(fixed_j, fixed_k);
      cfg.replicates = replicates;
      cfg.threads = c.threads;
      const ConvergenceResult res = convergence_study(cfg, ns, grid);
      write_file(out_path, [&](std::ostream& o) {
        o << "n,mean_log_se,se_median\n";
        for (const auto& pt : res.points)
          o << pt.n << "," << pt.mean_log_se << "," << pt.se_median << "\n";
      });
      std::cout << "convergence: slope=" << res.slope << "\n";
    } else if (*wdist_cmd) {
      std::vector<std::string> ids;
      const auto xs = ingest(x_path, c.format, grid, &ids);
      write_file(out_path, [&](std::ostream& o) {
        o << "unit_id";
        for (const auto& id : ids) o << "," << id;
        o << "\n";
        for (std::size_t i = 0; i < xs.size(); ++i) {
          o << ids[i];
          for (std::size_t j = 0; j < xs.size(); ++j)
            o << "," << wasserstein_distance(xs[i], xs[j]);
          o << "\n";
        }
      });
    }
  } catch (const Error& ex) {
    std::cerr << "error[" << ex.code() << "]: " << ex.what() << "\n";
    return ex.exit_code();
  } catch (const std::exception& ex) {
    std::cerr << "error[internal]: " << ex.what() << "\n";
    return 1;
  }
  return 0;
}

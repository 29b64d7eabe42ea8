#include "wassreg/io.hpp"

#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "wassreg/errors.hpp"

namespace wassreg {
namespace {

using nlohmann::json;

constexpr int kFormatVersion = 1;

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s, int line_no) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw malformed_csv("line " + std::to_string(line_no) + ": not a number: '" + s + "'");
  }
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw invalid_input("cannot open file: " + path);
  return in;
}

void print_row(std::ostream& out, double v) {
  out << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
}

json vec_to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Eigen::VectorXd json_to_vec(const json& a) {
  if (!a.is_array()) throw invalid_input("model file: expected an array");
  Eigen::VectorXd v(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) v[i] = a[i].get<double>();
  return v;
}

json mat_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) rows.push_back(vec_to_json(m.row(i)));
  return rows;
}

Eigen::MatrixXd json_to_mat(const json& a) {
  if (!a.is_array() || a.empty()) throw invalid_input("model file: expected a matrix");
  Eigen::MatrixXd m(a.size(), a[0].size());
  for (std::size_t i = 0; i < a.size(); ++i) m.row(i) = json_to_vec(a[i]);
  return m;
}

json envelope(const std::string& kind, int grid_m, std::uint64_t seed,
              const std::string& config) {
  json j;
  j["format_version"] = kFormatVersion;
  j["kind"] = kind;
  j["grid_m"] = grid_m;
  j["seed"] = seed;
  j["config_hash"] = config_hash(config);
  return j;
}

json load_envelope(const std::string& path, const std::string& kind, GridPtr* grid) {
  std::ifstream in = open_input(path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& ex) {
    throw invalid_input("model file is not valid JSON: " + std::string(ex.what()));
  }
  if (!j.contains("format_version") || j["format_version"].get<int>() != kFormatVersion)
    throw invalid_input("model file has an unsupported format version");
  if (!j.contains("kind") || j["kind"].get<std::string>() != kind)
    throw invalid_input("model file holds a '" +
                        j.value("kind", std::string("?")) + "' model, expected '" + kind + "'");
  *grid = ProbGrid::midpoint(j.at("grid_m").get<int>());
  return j;
}

json eigensystem_to_json(const EigenSystem& es) {
  json j;
  j["eigenvalues"] = vec_to_json(es.eigenvalues);
  j["eigenfunctions"] = mat_to_json(es.eigenfunctions);
  j["fve"] = vec_to_json(es.fve);
  return j;
}

EigenSystem eigensystem_from_json(const json& j, const DistributionQ& base) {
  return EigenSystem{base, json_to_vec(j.at("eigenvalues")),
                     json_to_mat(j.at("eigenfunctions")), json_to_vec(j.at("fve"))};
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw invalid_input("cannot write file: " + path);
  out << j.dump(1) << "\n";
}

}  // namespace

LongData read_long_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw malformed_csv("empty input");
  auto header = split_csv_line(line);
  if (header.size() != 2 || header[0] != "unit_id" || header[1] != "value")
    throw malformed_csv("expected header 'unit_id,value'");
  LongData data;
  std::map<std::string, std::size_t> index;
  std::vector<std::vector<double>> buckets;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto cells = split_csv_line(line);
    if (cells.size() != 2)
      throw malformed_csv("line " + std::to_string(line_no) + ": expected 2 columns");
    auto [it, fresh] = index.try_emplace(cells[0], buckets.size());
    if (fresh) {
      data.unit_ids.push_back(cells[0]);
      buckets.emplace_back();
    }
    buckets[it->second].push_back(parse_double(cells[1], line_no));
  }
  if (buckets.empty()) throw malformed_csv("no data rows");
  data.samples.reserve(buckets.size());
  for (auto& b : buckets) data.samples.emplace_back(std::move(b));
  return data;
}

LongData read_long_csv_file(const std::string& path) {
  std::ifstream in = open_input(path);
  return read_long_csv(in);
}

WideData read_wide_csv(std::istream& in, const GridPtr& grid_hint) {
  std::string line;
  if (!std::getline(in, line)) throw malformed_csv("empty input");
  auto header = split_csv_line(line);
  if (header.size() < 3 || header[0] != "unit_id")
    throw malformed_csv("expected header 'unit_id,q1,...,qM'");
  const int m = static_cast<int>(header.size()) - 1;
  GridPtr grid = grid_hint;
  if (grid) {
    if (grid->size() != m)
      throw incompatible_grid("file has " + std::to_string(m) +
                              " grid columns, expected " + std::to_string(grid->size()));
  } else {
    grid = ProbGrid::midpoint(m);
  }
  WideData data;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto cells = split_csv_line(line);
    if (static_cast<int>(cells.size()) != m + 1)
      throw malformed_csv("line " + std::to_string(line_no) + ": expected " +
                          std::to_string(m + 1) + " columns");
    Eigen::VectorXd q(m);
    for (int k = 0; k < m; ++k) q[k] = parse_double(cells[k + 1], line_no);
    data.unit_ids.push_back(cells[0]);
    try {
      data.distributions.emplace_back(grid, std::move(q));
    } catch (const NumericalError& ex) {
      throw malformed_csv("line " + std::to_string(line_no) + ": " + ex.what());
    }
  }
  if (data.distributions.empty()) throw malformed_csv("no data rows");
  return data;
}

WideData read_wide_csv_file(const std::string& path, const GridPtr& grid_hint) {
  std::ifstream in = open_input(path);
  return read_wide_csv(in, grid_hint);
}

std::vector<DistributionQ> to_distributions(const LongData& data, const GridPtr& grid) {
  std::vector<DistributionQ> out;
  out.reserve(data.samples.size());
  for (const auto& s : data.samples) out.push_back(estimate_distribution(s, grid));
  return out;
}

void write_wide_csv(std::ostream& out, const std::vector<std::string>& unit_ids,
                    const std::vector<DistributionQ>& ds) {
  if (unit_ids.size() != ds.size()) throw invalid_input("ids and distributions must pair up");
  if (ds.empty()) throw invalid_input("nothing to write");
  out << "unit_id";
  for (int k = 1; k <= ds[0].size(); ++k) out << ",q" << k;
  out << "\n";
  for (std::size_t i = 0; i < ds.size(); ++i) {
    out << unit_ids[i];
    for (int k = 0; k < ds[i].size(); ++k) {
      out << ",";
      print_row(out, ds[i].qvals()[k]);
    }
    out << "\n";
  }
}

void write_tidy_quantiles(std::ostream& out, const std::vector<std::string>& unit_ids,
                          const std::vector<DistributionQ>& ds) {
  if (unit_ids.size() != ds.size()) throw invalid_input("ids and distributions must pair up");
  out << "unit_id,p,qval\n";
  for (std::size_t i = 0; i < ds.size(); ++i)
    for (int k = 0; k < ds[i].size(); ++k) {
      out << unit_ids[i] << ",";
      print_row(out, ds[i].grid()->points()[k]);
      out << ",";
      print_row(out, ds[i].qvals()[k]);
      out << "\n";
    }
}

void write_tidy_density(std::ostream& out, const std::vector<std::string>& unit_ids,
                        const std::vector<DistributionQ>& ds) {
  if (unit_ids.size() != ds.size()) throw invalid_input("ids and distributions must pair up");
  out << "unit_id,x,fval\n";
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto& q = ds[i].qvals();
    const auto& p = ds[i].grid()->points();
    const int m = ds[i].size();
    for (int k = 0; k < m; ++k) {
      // Density as the difference quotient of p against the quantile values;
      // flat stretches (atoms) are skipped.
      const int lo = std::max(k - 1, 0);
      const int hi = std::min(k + 1, m - 1);
      const double dq = q[hi] - q[lo];
      if (!(dq > 0.0)) continue;
      out << unit_ids[i] << ",";
      print_row(out, q[k]);
      out << ",";
      print_row(out, (p[hi] - p[lo]) / dq);
      out << "\n";
    }
  }
}

void write_tidy_predictions(std::ostream& out, const std::vector<std::string>& unit_ids,
                            const std::vector<DistributionQ>& ds,
                            const std::vector<double>& etas) {
  if (unit_ids.size() != ds.size() || etas.size() != ds.size())
    throw invalid_input("ids, distributions and etas must pair up");
  out << "unit_id,p,qval,eta\n";
  for (std::size_t i = 0; i < ds.size(); ++i)
    for (int k = 0; k < ds[i].size(); ++k) {
      out << unit_ids[i] << ",";
      print_row(out, ds[i].grid()->points()[k]);
      out << ",";
      print_row(out, ds[i].qvals()[k]);
      out << ",";
      print_row(out, etas[i]);
      out << "\n";
    }
}

std::string distribution_to_json(const DistributionQ& d) {
  json j;
  j["grid_m"] = d.size();
  j["qvals"] = vec_to_json(d.qvals());
  return j.dump();
}

DistributionQ distribution_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    const int m = j.at("grid_m").get<int>();
    return DistributionQ(ProbGrid::midpoint(m), json_to_vec(j.at("qvals")));
  } catch (const json::exception& ex) {
    throw invalid_input(std::string("bad distribution JSON: ") + ex.what());
  }
}

std::string tangent_to_json(const TangentVector& v) {
  json j;
  j["base"] = json::parse(distribution_to_json(v.base()));
  j["vals"] = vec_to_json(v.vals());
  return j.dump();
}

void write_scalar_csv(std::ostream& out, const std::vector<std::string>& unit_ids,
                      const std::vector<double>& values) {
  if (unit_ids.size() != values.size()) throw invalid_input("ids and values must pair up");
  out << "unit_id,value\n";
  for (std::size_t i = 0; i < values.size(); ++i) {
    out << unit_ids[i] << ",";
    print_row(out, values[i]);
    out << "\n";
  }
}

std::vector<double> read_scalar_csv(std::istream& in, std::vector<std::string>* unit_ids) {
  std::string line;
  if (!std::getline(in, line)) throw malformed_csv("empty input");
  auto header = split_csv_line(line);
  if (header.size() != 2 || header[0] != "unit_id" || header[1] != "value")
    throw malformed_csv("expected header 'unit_id,value'");
  std::vector<double> values;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto cells = split_csv_line(line);
    if (cells.size() != 2)
      throw malformed_csv("line " + std::to_string(line_no) + ": expected 2 columns");
    if (unit_ids) unit_ids->push_back(cells[0]);
    values.push_back(parse_double(cells[1], line_no));
  }
  if (values.empty()) throw malformed_csv("no data rows");
  return values;
}

std::string config_hash(const std::string& canonical) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

void save_d2d_model(const std::string& path, const D2DFit& fit, std::uint64_t seed,
                    const std::string& config) {
  json j = envelope("d2d", fit.predictor_mean.mean.size(), seed, config);
  json m;
  m["predictor_mean"] = vec_to_json(fit.predictor_mean.mean.qvals());
  m["response_mean"] = vec_to_json(fit.response_mean.mean.qvals());
  m["n_train"] = fit.predictor_mean.n;
  m["es_x"] = eigensystem_to_json(fit.es_x);
  m["es_y"] = eigensystem_to_json(fit.es_y);
  m["trunc_j"] = fit.trunc_j;
  m["trunc_k"] = fit.trunc_k;
  m["coeff"] = mat_to_json(fit.coeff);
  m["xi"] = mat_to_json(fit.xi);
  m["train_eta"] = fit.train_eta;
  m["train_discrepancy"] = fit.train_discrepancy;
  j["model"] = std::move(m);
  write_json(path, j);
}

D2DFit load_d2d_model(const std::string& path) {
  GridPtr grid;
  const json j = load_envelope(path, "d2d", &grid);
  const json& m = j.at("model");
  DistributionQ pm(grid, json_to_vec(m.at("predictor_mean")));
  DistributionQ rm(grid, json_to_vec(m.at("response_mean")));
  const int n = m.at("n_train").get<int>();
  D2DFit fit{FrechetMean{pm, n},
             FrechetMean{rm, n},
             eigensystem_from_json(m.at("es_x"), pm),
             eigensystem_from_json(m.at("es_y"), rm),
             m.at("trunc_j").get<int>(),
             m.at("trunc_k").get<int>(),
             json_to_mat(m.at("coeff")),
             json_to_mat(m.at("xi")),
             m.at("train_eta").get<std::vector<double>>(),
             m.at("train_discrepancy").get<std::vector<double>>()};
  return fit;
}

void save_d2s_model(const std::string& path, const ScalarFit& fit, std::uint64_t seed,
                    const std::string& config) {
  json j = envelope("d2s", fit.predictor_mean.mean.size(), seed, config);
  json m;
  m["predictor_mean"] = vec_to_json(fit.predictor_mean.mean.qvals());
  m["n_train"] = fit.predictor_mean.n;
  m["es_x"] = eigensystem_to_json(fit.es_x);
  m["trunc_j"] = fit.trunc_j;
  m["beta1_scores"] = vec_to_json(fit.beta1_scores);
  m["intercept"] = fit.intercept;
  j["model"] = std::move(m);
  write_json(path, j);
}

ScalarFit load_d2s_model(const std::string& path) {
  GridPtr grid;
  const json j = load_envelope(path, "d2s", &grid);
  const json& m = j.at("model");
  DistributionQ pm(grid, json_to_vec(m.at("predictor_mean")));
  return ScalarFit{FrechetMean{pm, m.at("n_train").get<int>()},
                   eigensystem_from_json(m.at("es_x"), pm), m.at("trunc_j").get<int>(),
                   json_to_vec(m.at("beta1_scores")), m.at("intercept").get<double>()};
}

void save_ar_model(const std::string& path, const ARFit& fit, std::uint64_t seed,
                   const std::string& config) {
  json j = envelope("ar", fit.mean.mean.size(), seed, config);
  json m;
  m["mean"] = vec_to_json(fit.mean.mean.qvals());
  m["n_train"] = fit.mean.n;
  m["es"] = eigensystem_to_json(fit.es);
  m["trunc_j"] = fit.trunc_j;
  m["coeff"] = mat_to_json(fit.coeff);
  m["last"] = vec_to_json(fit.last.qvals());
  m["test_error"] = fit.test_error;
  j["model"] = std::move(m);
  write_json(path, j);
}

ARFit load_ar_model(const std::string& path) {
  GridPtr grid;
  const json j = load_envelope(path, "ar", &grid);
  const json& m = j.at("model");
  DistributionQ mean(grid, json_to_vec(m.at("mean")));
  return ARFit{FrechetMean{mean, m.at("n_train").get<int>()},
               eigensystem_from_json(m.at("es"), mean),
               m.at("trunc_j").get<int>(),
               json_to_mat(m.at("coeff")),
               DistributionQ(grid, json_to_vec(m.at("last"))),
               m.at("test_error").get<double>()};
}

}  // namespace wassreg

#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "wassreg/d2s.hpp"
#include "wassreg/war.hpp"

namespace wassreg {

// Long format: header "unit_id,value", one raw observation per row.  Units
// are returned in order of first appearance.
struct LongData {
  std::vector<std::string> unit_ids;
  std::vector<SampleSet> samples;
};

LongData read_long_csv(std::istream& in);
LongData read_long_csv_file(const std::string& path);

// Wide format: header "unit_id,q1,...,qM" (names ignored beyond the count),
// one quantile function per row, evaluated on the midpoint grid of size M.
struct WideData {
  std::vector<std::string> unit_ids;
  std::vector<DistributionQ> distributions;
};

WideData read_wide_csv(std::istream& in, const GridPtr& grid_hint = nullptr);
WideData read_wide_csv_file(const std::string& path, const GridPtr& grid_hint = nullptr);

std::vector<DistributionQ> to_distributions(const LongData& data, const GridPtr& grid);

void write_wide_csv(std::ostream& out, const std::vector<std::string>& unit_ids,
                    const std::vector<DistributionQ>& ds);

// Tidy emission: "unit_id,p,qval" plus an optional density companion
// "unit_id,x,fval" with the density evaluated by differencing the quantile
// function.
void write_tidy_quantiles(std::ostream& out, const std::vector<std::string>& unit_ids,
                          const std::vector<DistributionQ>& ds);
void write_tidy_density(std::ostream& out, const std::vector<std::string>& unit_ids,
                        const std::vector<DistributionQ>& ds);

// Prediction emission "unit_id,p,qval,eta" with the boundary-projection
// factor repeated per row.
void write_tidy_predictions(std::ostream& out, const std::vector<std::string>& unit_ids,
                            const std::vector<DistributionQ>& ds,
                            const std::vector<double>& etas);

// Scalar table "unit_id,value" (predictions, scalar responses).
void write_scalar_csv(std::ostream& out, const std::vector<std::string>& unit_ids,
                      const std::vector<double>& values);
std::vector<double> read_scalar_csv(std::istream& in, std::vector<std::string>* unit_ids = nullptr);

// Standalone JSON forms: {"grid_m": M, "qvals": [...]} for a distribution
// and {"base": {...}, "vals": [...]} as a tangent-vector debugging dump.
std::string distribution_to_json(const DistributionQ& d);
DistributionQ distribution_from_json(const std::string& text);
std::string tangent_to_json(const TangentVector& v);

// FNV-1a over the canonical serialized configuration, hex-encoded.
std::string config_hash(const std::string& canonical);

// Model envelopes.  Each file carries format_version, kind, grid size, the
// seed/config hash of the producing run and the model payload.
void save_d2d_model(const std::string& path, const D2DFit& fit, std::uint64_t seed,
                    const std::string& config);
D2DFit load_d2d_model(const std::string& path);

void save_d2s_model(const std::string& path, const ScalarFit& fit, std::uint64_t seed,
                    const std::string& config);
ScalarFit load_d2s_model(const std::string& path);

void save_ar_model(const std::string& path, const ARFit& fit, std::uint64_t seed,
                   const std::string& config);
ARFit load_ar_model(const std::string& path);

}  // namespace wassreg

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qtran/oracle.hpp"
#include "qtran/propagator.hpp"

namespace qtran {

struct ModelSpec {
  enum class Kind { SingleSite, Chain, Explicit };

  Kind kind = Kind::SingleSite;
  double eps_d = 0.0;     // single_site, chain
  double hop = -1.0;      // chain
  int sites = 1;          // chain
  double lambda_L = 0.0;  // builtins: scalar line-width at the attached site
  double lambda_R = 0.0;
  double mu0 = 0.0;
  CMatrix h0;             // explicit
  CMatrix lambda_L_matrix;
  CMatrix lambda_R_matrix;

  DeviceModel build() const;
};

struct OracleSpec {
  double bandwidth = 2.0;
  int levels = 400;
  double dt = 0.005;
  int decimation = 20;
  OracleInit init = OracleInit::PartitionFree;
  FermiTiePolicy tie = FermiTiePolicy::Half;
};

struct TransmissionSpec {
  double e_lo = -2.0;
  double e_hi = 2.0;
  int points = 401;
};

struct RunConfig {
  ModelSpec model;
  BiasProfile bias;
  InducedFockRule rule;
  DissipatorKind dissipator = DissipatorKind::WblAdiabatic;
  double dt = 0.02;
  double t_end = 50.0;
  int decimation = 1;
  double eps_min = kDefaultEpsMin;
  bool scba = false;
  std::string output;
  std::optional<OracleSpec> oracle;
  TransmissionSpec transmission;
  std::vector<double> iv_voltages;  // right-lead settled voltages for an I-V table
  std::vector<std::string> sweep;   // each entry a JSON object merged over the base document

  PropagatorOptions propagator_options() const;
};

bool operator==(const RunConfig& a, const RunConfig& b);

/// Throws ParseError with line:column, or ValidationError naming the offending field.
RunConfig parse_config(const std::string& text);
std::string serialize_config(const RunConfig& cfg);
/// Base document with sweep entry `index` merged in (RFC 7396 merge patch).
RunConfig sweep_entry(const std::string& base_text, std::size_t index);

/// QTRAN_EPS_MIN when set and valid, else the configured cutoff.
double effective_eps_min(const RunConfig& cfg);

}  // namespace qtran

#pragma once

#include <optional>

#include "qtran/model.hpp"
#include "qtran/propagator.hpp"

namespace qtran {

/// Flat finite band realizing a line-width matrix: one channel per eigen-direction
/// of Lambda, each with n levels at the midpoints of [mu0 - W/2, mu0 + W/2].
struct DiscretizedLead {
  int n_levels = 0;
  double bandwidth = 0.0;
  double mu0 = 0.0;
  int channels = 0;
  Eigen::VectorXd energies;  // per lead state
  CMatrix coupling;          // n_orb x states, device-to-lead hopping h_{n k}

  Eigen::Index states() const { return energies.size(); }
};

/// Throws NotPSD for an indefinite target.
DiscretizedLead discretize_lead(const CMatrix& target_lambda, double W, int n, double mu0 = 0.0);
/// pi (n/W) v v^dagger summed over channels
CMatrix implied_linewidth(const DiscretizedLead& lead);
/// 2 pi hbar n / W in fs.
double recurrence_time(const DiscretizedLead& lead);

enum class OracleInit { Partitioned, PartitionFree };
enum class FermiTiePolicy { Error, Half };

struct OracleOptions {
  double dt = 0.005;
  double t_end = 20.0;
  int decimation = 1;
  OracleInit init = OracleInit::PartitionFree;
  FermiTiePolicy tie = FermiTiePolicy::Error;
  Eigen::Index max_dimension = 4000;
};

/// Propagates the full device + discretized-lead single-particle density matrix.
/// J_alpha = -tr Q_alpha is taken from the device-lead block of the full state.
TraceRecord propagate_full(const DeviceModel& model, const DiscretizedLead& left, const DiscretizedLead& right,
                           const BiasProfile& bias, const InducedFockRule& rule, const OracleOptions& options);

struct SchemeComparison {
  TraceRecord partitioned;
  TraceRecord partition_free;
  double max_difference_after_window = 0.0;  // microampere
  double steady_partitioned = 0.0;           // mean J_R over the final quarter, microampere
  double steady_partition_free = 0.0;
  double relative_steady_difference = 0.0;
  double max_partition_free_current = 0.0;   // max |J| over both leads
};

SchemeComparison compare_schemes(const DeviceModel& model, const DiscretizedLead& left,
                                 const DiscretizedLead& right, const BiasProfile& bias,
                                 const InducedFockRule& rule, OracleOptions options, double equilibration = 5.0);

struct TraceDeviation {
  double max_abs = 0.0;        // microampere, either lead
  double max_relative = 0.0;   // max_abs / max |J| of the reference
  double at_time = 0.0;
  double reference_peak = 0.0;
  std::size_t samples = 0;
};

/// Pointwise |J_test - J_ref| on the reference samples with t <= t_max; the test trace is
/// linearly interpolated in time.
TraceDeviation trace_deviation(const TraceRecord& reference, const TraceRecord& test, double t_max);

}  // namespace qtran

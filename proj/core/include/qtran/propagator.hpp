#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "qtran/cso.hpp"
#include "qtran/wbl.hpp"

namespace qtran {

enum class DissipatorKind { WblAdiabatic, WblExact, Cso };

const char* to_string(DissipatorKind kind);

struct SimState {
  double t = 0.0;
  CMatrix sigma;
};

struct PropagatorOptions {
  double dt = 0.02;      // fs
  double t_end = 50.0;   // fs
  int decimation = 1;
  DissipatorKind kind = DissipatorKind::WblAdiabatic;
  double eps_min = kDefaultEpsMin;
  bool scba = false;     // Cso only
};

struct RunDiagnostics {
  double max_hermiticity_drift = 0.0;    // before re-symmetrization
  double max_hermiticity_after = 0.0;
  double max_continuity_residual = 0.0;  // per fs
  double max_k_hermiticity = 0.0;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  int steps = 0;
};

struct TraceRecord {
  std::vector<double> times;        // fs
  std::vector<double> j_L;          // microampere
  std::vector<double> j_R;
  std::vector<double> trace_sigma;
  std::vector<std::vector<double>> occupations;  // [orbital][sample]
  RunDiagnostics diagnostics;
  std::string meta;                 // JSON echo of the run configuration
  std::optional<SimState> final_state;

  std::size_t size() const { return times.size(); }
};

/// Settling time: start of the first window of length `window` fs over which
/// both |dJ/dt| stay below `threshold` microampere/fs. Empty when never settled.
std::optional<double> settling_time(const TraceRecord& rec, double window = 5.0, double threshold = 1e-4);

/// Classical RK4 on d sigma/dt = (-i[h, sigma] - sum Q) / hbar.
class Propagator {
 public:
  Propagator(DeviceModel model, BiasProfile bias, InducedFockRule rule, PropagatorOptions options);

  SimState initial_state() const;
  /// Advances by dt; throws StateCorrupt or NonFinite.
  SimState step(const SimState& s, double dt);
  TraceRecord run();
  TraceRecord run_from(SimState s);

  /// Q_L, Q_R at time t for state sigma.
  DissipatorOutput dissipation(double t, const CMatrix& sigma);
  CMatrix h_at(double t) const;
  const WblDissipator& wbl() const { return wbl_; }
  const PropagatorOptions& options() const { return opt_; }

 private:
  struct Flux {
    CMatrix rhs;
    double j_sum = 0.0;  // -sum tr Q, eV
  };
  Flux evaluate(double t, const CMatrix& sigma);
  const std::array<CMatrix, 2>& k_at(double t);

  WblDissipator wbl_;
  PropagatorOptions opt_;
  std::array<CausalityTransforms, 2> cso_;
  CMatrix h_cso_;
  // Small memo of K(t); K does not depend on sigma.
  std::vector<std::pair<double, std::array<CMatrix, 2>>> k_cache_;
  RunDiagnostics diag_;
  double last_flux_ = 0.0;
};

}  // namespace qtran

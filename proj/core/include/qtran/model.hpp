#pragma once

#include <vector>

#include "qtran/matrix.hpp"

namespace qtran {

enum class Lead { L, R };
inline constexpr Lead kLeads[] = {Lead::L, Lead::R};
const char* lead_name(Lead lead);

struct DeviceModel {
  int n_orb = 0;
  CMatrix h0;
  CMatrix lambda_L;
  CMatrix lambda_R;
  double mu0 = 0.0;

  const CMatrix& lambda(Lead lead) const { return lead == Lead::L ? lambda_L : lambda_R; }
  CMatrix lambda_total() const { return lambda_L + lambda_R; }
  /// Throws InvalidModel on a broken invariant.
  void validate() const;
};

DeviceModel make_model(const CMatrix& h0, const CMatrix& lambda_L, const CMatrix& lambda_R, double mu0);
DeviceModel build_single_site(double eps_d, double lam_L, double lam_R, double mu0);
/// Tridiagonal chain; leads attach to the first and last site.
DeviceModel build_chain(int n, double eps, double hop, double lam_end_L, double lam_end_R, double mu0);

/// Voltage protocol of one lead. Level shifts are the negated voltage.
struct LeadBias {
  enum class Kind { Zero, SmoothStep, Tabulated };

  Kind kind = Kind::Zero;
  double amplitude = 0.0;   // Delta V (V)
  double rise_time = 0.1;   // a (fs)
  std::vector<double> times;     // fs, tabulated only
  std::vector<double> voltages;  // V, tabulated only

  static LeadBias zero();
  static LeadBias smooth_step(double delta_v, double rise_time);
  static LeadBias tabulated(std::vector<double> times, std::vector<double> voltages);

  void validate() const;
  double voltage(double t) const;
  double level_shift(double t) const { return -voltage(t); }
  /// \int_0^t level_shift
  double level_shift_integral(double t) const;
  double settled_level_shift() const;
};

struct BiasProfile {
  LeadBias left;
  LeadBias right;

  const LeadBias& lead(Lead l) const { return l == Lead::L ? left : right; }
  bool is_zero() const;
};

double bias_at(const BiasProfile& profile, Lead lead, double t);

/// Bias-induced change of the device Hamiltonian, delta h(t).
struct InducedFockRule {
  enum class Kind { HalfSum, None, Tabulated };

  Kind kind = Kind::HalfSum;
  std::vector<double> times;
  std::vector<CMatrix> values;

  static InducedFockRule half_sum();
  static InducedFockRule none();
  static InducedFockRule tabulated(std::vector<double> times, std::vector<CMatrix> values);

  void validate(int n_orb) const;
  bool is_scalar() const { return kind != Kind::Tabulated; }
  /// Scalar rules only: delta h = s(t) I.
  double scalar_shift(const BiasProfile& bias, double t) const;
  double scalar_shift_integral(const BiasProfile& bias, double t) const;

  CMatrix delta_h(const BiasProfile& bias, double t, int n_orb) const;
  CMatrix delta_h_integral(const BiasProfile& bias, double t, int n_orb) const;
  CMatrix delta_h_settled(const BiasProfile& bias, int n_orb) const;
};

struct LinewidthResult {
  CMatrix lambda;
  double min_eigenvalue = 0.0;
  bool not_psd = false;  // warning only
};

/// Lambda = -Im{h g h^dagger}, made exactly Hermitian.
LinewidthResult linewidth_from_surface_gf(const CMatrix& h_coupling, const CMatrix& g_r_surface);

double min_hermitian_eigenvalue(const CMatrix& a);

}  // namespace qtran

#include "qtran/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qtran/error.hpp"

namespace qtran {

namespace {

void check_dim(const CMatrix& m, int n, const char* name) {
  if (m.rows() != n || m.cols() != n) {
    throw Error(ErrorKind::InvalidModel, std::string(name) + " has wrong dimension");
  }
}

// Index of the table interval containing t.
std::size_t locate(const std::vector<double>& times, double t) {
  if (times.empty() || t < times.front() || t > times.back()) {
    throw Error(ErrorKind::OutOfTableRange, "time " + std::to_string(t) + " fs outside table range");
  }
  auto it = std::upper_bound(times.begin(), times.end(), t);
  std::size_t i = static_cast<std::size_t>(it - times.begin());
  if (i == 0) return 0;
  return std::min(i - 1, times.size() - 2);
}

void check_table_times(const std::vector<double>& times, std::size_t n_values) {
  if (times.size() < 2 || times.size() != n_values) {
    throw Error(ErrorKind::InvalidBias, "table needs at least two samples and matching lengths");
  }
  if (times.front() != 0.0) throw Error(ErrorKind::InvalidBias, "table must start at t = 0");
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) {
      throw Error(ErrorKind::InvalidBias, "table times must be strictly increasing");
    }
  }
}

}  // namespace

const char* lead_name(Lead lead) { return lead == Lead::L ? "L" : "R"; }

double min_hermitian_eigenvalue(const CMatrix& a) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian_part(a), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

void DeviceModel::validate() const {
  if (n_orb < 1) throw Error(ErrorKind::InvalidModel, "n_orb must be positive");
  check_dim(h0, n_orb, "h0");
  check_dim(lambda_L, n_orb, "lambda_L");
  check_dim(lambda_R, n_orb, "lambda_R");
  if (hermiticity_defect(h0) > 1e-12) throw Error(ErrorKind::InvalidModel, "h0 not Hermitian");
  for (Lead l : kLeads) {
    const CMatrix& lam = lambda(l);
    const std::string name = std::string("lambda_") + lead_name(l);
    if (hermiticity_defect(lam) > 1e-12) throw Error(ErrorKind::InvalidModel, name + " not Hermitian");
    if (min_hermitian_eigenvalue(lam) < -1e-12) {
      throw Error(ErrorKind::InvalidModel, name + " not positive semidefinite");
    }
  }
  if (!std::isfinite(mu0)) throw Error(ErrorKind::InvalidModel, "mu0 not finite");
}

DeviceModel make_model(const CMatrix& h0, const CMatrix& lambda_L, const CMatrix& lambda_R, double mu0) {
  DeviceModel m{static_cast<int>(h0.rows()), h0, lambda_L, lambda_R, mu0};
  m.validate();
  return m;
}

DeviceModel build_single_site(double eps_d, double lam_L, double lam_R, double mu0) {
  return build_chain(1, eps_d, 0.0, lam_L, lam_R, mu0);
}

DeviceModel build_chain(int n, double eps, double hop, double lam_end_L, double lam_end_R, double mu0) {
  if (n < 1) throw Error(ErrorKind::InvalidModel, "chain length must be positive");
  if (lam_end_L < 0.0 || lam_end_R < 0.0) {
    throw Error(ErrorKind::NegativeLinewidth, "line-widths must be non-negative");
  }
  CMatrix h = CMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    h(i, i) = eps;
    if (i + 1 < n) h(i, i + 1) = h(i + 1, i) = hop;
  }
  CMatrix lL = CMatrix::Zero(n, n);
  CMatrix lR = CMatrix::Zero(n, n);
  lL(0, 0) = lam_end_L;
  lR(n - 1, n - 1) = lam_end_R;
  return make_model(h, lL, lR, mu0);
}

LeadBias LeadBias::zero() { return LeadBias{}; }

LeadBias LeadBias::smooth_step(double delta_v, double rise_time) {
  LeadBias b;
  b.kind = Kind::SmoothStep;
  b.amplitude = delta_v;
  b.rise_time = rise_time;
  b.validate();
  return b;
}

LeadBias LeadBias::tabulated(std::vector<double> times, std::vector<double> voltages) {
  LeadBias b;
  b.kind = Kind::Tabulated;
  b.times = std::move(times);
  b.voltages = std::move(voltages);
  b.validate();
  return b;
}

void LeadBias::validate() const {
  switch (kind) {
    case Kind::Zero:
      return;
    case Kind::SmoothStep:
      if (!(rise_time > 0.0) || !std::isfinite(amplitude)) {
        throw Error(ErrorKind::InvalidBias, "smooth step needs rise_time > 0 and finite amplitude");
      }
      return;
    case Kind::Tabulated:
      check_table_times(times, voltages.size());
      if (voltages.front() != 0.0) {
        throw Error(ErrorKind::InvalidBias, "tabulated bias must start from zero (no jump at switch-on)");
      }
      return;
  }
}

double LeadBias::voltage(double t) const {
  switch (kind) {
    case Kind::Zero:
      return 0.0;
    case Kind::SmoothStep:
      return t <= 0.0 ? 0.0 : -amplitude * std::expm1(-t / rise_time);
    case Kind::Tabulated: {
      if (t < 0.0) return 0.0;
      const std::size_t i = locate(times, t);
      const double w = (t - times[i]) / (times[i + 1] - times[i]);
      return (1.0 - w) * voltages[i] + w * voltages[i + 1];
    }
  }
  return 0.0;
}

double LeadBias::level_shift_integral(double t) const {
  if (t <= 0.0) return 0.0;
  switch (kind) {
    case Kind::Zero:
      return 0.0;
    case Kind::SmoothStep:
      return -amplitude * (t + rise_time * std::expm1(-t / rise_time));
    case Kind::Tabulated: {
      const std::size_t last = locate(times, t);
      double acc = 0.0;
      for (std::size_t i = 0; i < last; ++i) {
        acc += 0.5 * (voltages[i] + voltages[i + 1]) * (times[i + 1] - times[i]);
      }
      acc += 0.5 * (voltages[last] + voltage(t)) * (t - times[last]);
      return -acc;
    }
  }
  return 0.0;
}

double LeadBias::settled_level_shift() const {
  switch (kind) {
    case Kind::Zero: return 0.0;
    case Kind::SmoothStep: return -amplitude;
    case Kind::Tabulated: return -voltages.back();
  }
  return 0.0;
}

bool BiasProfile::is_zero() const {
  auto zero = [](const LeadBias& b) {
    if (b.kind == LeadBias::Kind::Zero) return true;
    if (b.kind == LeadBias::Kind::SmoothStep) return b.amplitude == 0.0;
    return std::all_of(b.voltages.begin(), b.voltages.end(), [](double v) { return v == 0.0; });
  };
  return zero(left) && zero(right);
}

double bias_at(const BiasProfile& profile, Lead lead, double t) { return profile.lead(lead).level_shift(t); }

InducedFockRule InducedFockRule::half_sum() { return InducedFockRule{}; }

InducedFockRule InducedFockRule::none() {
  InducedFockRule r;
  r.kind = Kind::None;
  return r;
}

InducedFockRule InducedFockRule::tabulated(std::vector<double> times, std::vector<CMatrix> values) {
  InducedFockRule r;
  r.kind = Kind::Tabulated;
  r.times = std::move(times);
  r.values = std::move(values);
  return r;
}

void InducedFockRule::validate(int n_orb) const {
  if (kind != Kind::Tabulated) return;
  check_table_times(times, values.size());
  for (const CMatrix& v : values) {
    if (v.rows() != n_orb || v.cols() != n_orb) {
      throw Error(ErrorKind::InvalidModel, "tabulated delta h has wrong dimension");
    }
    if (hermiticity_defect(v) > 1e-12) throw Error(ErrorKind::InvalidModel, "tabulated delta h not Hermitian");
  }
}

double InducedFockRule::scalar_shift(const BiasProfile& bias, double t) const {
  if (kind == Kind::None) return 0.0;
  return 0.5 * (bias.left.level_shift(t) + bias.right.level_shift(t));
}

double InducedFockRule::scalar_shift_integral(const BiasProfile& bias, double t) const {
  if (kind == Kind::None) return 0.0;
  return 0.5 * (bias.left.level_shift_integral(t) + bias.right.level_shift_integral(t));
}

CMatrix InducedFockRule::delta_h(const BiasProfile& bias, double t, int n_orb) const {
  if (is_scalar()) return scalar_shift(bias, t) * CMatrix::Identity(n_orb, n_orb);
  if (t <= 0.0) return values.front();
  const std::size_t i = locate(times, t);
  const double w = (t - times[i]) / (times[i + 1] - times[i]);
  return (1.0 - w) * values[i] + w * values[i + 1];
}

CMatrix InducedFockRule::delta_h_integral(const BiasProfile& bias, double t, int n_orb) const {
  if (is_scalar()) return scalar_shift_integral(bias, t) * CMatrix::Identity(n_orb, n_orb);
  if (t <= 0.0) return CMatrix::Zero(n_orb, n_orb);
  const std::size_t last = locate(times, t);
  CMatrix acc = CMatrix::Zero(n_orb, n_orb);
  for (std::size_t i = 0; i < last; ++i) acc += 0.5 * (values[i] + values[i + 1]) * (times[i + 1] - times[i]);
  acc += 0.5 * (values[last] + delta_h(bias, t, n_orb)) * (t - times[last]);
  return acc;
}

CMatrix InducedFockRule::delta_h_settled(const BiasProfile& bias, int n_orb) const {
  if (kind == Kind::None) return CMatrix::Zero(n_orb, n_orb);
  if (kind == Kind::HalfSum) {
    const double s = 0.5 * (bias.left.settled_level_shift() + bias.right.settled_level_shift());
    return s * CMatrix::Identity(n_orb, n_orb);
  }
  return values.back();
}

LinewidthResult linewidth_from_surface_gf(const CMatrix& h_coupling, const CMatrix& g_r_surface) {
  if (g_r_surface.rows() != g_r_surface.cols() || h_coupling.cols() != g_r_surface.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "coupling and surface Green's function dimensions disagree");
  }
  const CMatrix m = h_coupling * g_r_surface * h_coupling.adjoint();
  LinewidthResult out;
  out.lambda = 0.5 * kI * (m - m.adjoint());
  out.lambda = hermitian_part(out.lambda);
  out.min_eigenvalue = min_hermitian_eigenvalue(out.lambda);
  out.not_psd = out.min_eigenvalue < -1e-10;
  return out;
}

}  // namespace qtran

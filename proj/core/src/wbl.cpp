#include "qtran/wbl.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "qtran/error.hpp"
#include "qtran/units.hpp"

namespace qtran {

namespace {

using units::kHbar;
using Rule = boost::math::quadrature::gauss<double, 10>;

constexpr double kBasePanel = 0.25;  // fs
constexpr int kMaxDoublings = 10;

EigenDecomposition shifted(const EigenDecomposition& ed, cplx c) {
  EigenDecomposition out = ed;
  out.values.array() += c;
  return out;
}

}  // namespace

WblDissipator::WblDissipator(DeviceModel model, BiasProfile bias, InducedFockRule rule, double eps_min)
    : model_(std::move(model)), bias_(std::move(bias)), rule_(std::move(rule)), eps_min_(eps_min) {
  model_.validate();
  bias_.left.validate();
  bias_.right.validate();
  rule_.validate(model_.n_orb);
  lambda_ = model_.lambda_total();
  ed0_ = eig(model_.h0 - kI * lambda_);
}

cplx WblDissipator::pref() { return -2.0 * kI / M_PI; }

double WblDissipator::scalar_phase(double t) const { return rule_.scalar_shift_integral(bias_, t); }

WblState WblDissipator::state_at(double t) const {
  const int n = model_.n_orb;
  WblState s;
  s.t = t;
  s.phase_h = model_.h0 * t + rule_.delta_h_integral(bias_, t, n);
  s.h_now = model_.h0 + rule_.delta_h(bias_, t, n);
  for (Lead l : kLeads) {
    s.phase_bias[lead_index(l)] = bias_.lead(l).level_shift_integral(t);
    s.level_shift[lead_index(l)] = bias_.lead(l).level_shift(t);
  }
  if (rule_.is_scalar()) {
    const cplx theta = std::exp(-kI * scalar_phase(t) / kHbar);
    CVector f = (-kI * ed0_.values * (t / kHbar)).array().exp();
    s.u_minus = theta * ed0_.apply(f);
  } else {
    s.u_minus = expm(-kI * s.phase_h / kHbar - lambda_ * (t / kHbar));
  }
  return s;
}

CMatrix WblDissipator::p_minus(const WblState& s, Lead lead) const {
  const CMatrix& lam_a = model_.lambda(lead);
  if (s.t <= 0.0) {
    return pref() * resolvent_integral_log_completed(ed0_, model_.mu0, eps_min_) * lam_a;
  }
  const cplx phase = std::exp(kI * s.phase_bias[lead_index(lead)] / kHbar);
  return pref() * phase * s.u_minus * resolvent_integral_osc(ed0_, model_.mu0, s.t / kHbar) * lam_a;
}

CMatrix WblDissipator::p_plus_adiabatic(const WblState& s, Lead lead) const {
  const int n = model_.n_orb;
  if (s.t <= 0.0) return CMatrix::Zero(n, n);
  const double shift = s.level_shift[lead_index(lead)];
  EigenDecomposition ed = rule_.is_scalar()
                              ? shifted(ed0_, rule_.scalar_shift(bias_, s.t) - shift)
                              : eig(s.h_now - kI * lambda_ - shift * CMatrix::Identity(n, n));
  const cplx phase = std::exp(kI * s.phase_bias[lead_index(lead)] / kHbar);
  const CMatrix brace = resolvent_integral_log_completed(ed, model_.mu0, eps_min_) -
                        phase * s.u_minus * resolvent_integral_osc(ed, model_.mu0, s.t / kHbar);
  return pref() * brace * model_.lambda(lead);
}

CMatrix WblDissipator::k_plus_adiabatic(const WblState& s, Lead lead) const {
  const CMatrix p = p_plus_adiabatic(s, lead);
  return p + p.adjoint();
}

CMatrix WblDissipator::propagator_v(double t, double tau, Lead lead) const {
  const LeadBias& b = bias_.lead(lead);
  const double bias_phase = b.level_shift_integral(t) - b.level_shift_integral(tau);
  if (rule_.is_scalar()) {
    const double phase = bias_phase - (scalar_phase(t) - scalar_phase(tau));
    CVector f = (-kI * ed0_.values * ((t - tau) / kHbar)).array().exp();
    return std::exp(kI * phase / kHbar) * ed0_.apply(f);
  }
  const int n = model_.n_orb;
  const CMatrix dphi = model_.h0 * (t - tau) + rule_.delta_h_integral(bias_, t, n) -
                       rule_.delta_h_integral(bias_, tau, n);
  return std::exp(kI * bias_phase / kHbar) * expm(-kI * dphi / kHbar - lambda_ * ((t - tau) / kHbar));
}

CMatrix WblDissipator::k_plus_exact(const WblState& s, Lead lead, double tol) const {
  const int n = model_.n_orb;
  const double t = s.t;
  if (t <= 0.0) return CMatrix::Zero(n, n);
  const CMatrix& lam_a = model_.lambda(lead);
  const double mu = model_.mu0;

  auto integrand = [&](double sv) -> CMatrix {
    const CMatrix g = (2.0 * kI / M_PI) * propagator_v(t, t - sv, lead) *
                      std::exp(kI * mu * sv / kHbar) * lam_a / sv;
    return g + g.adjoint();
  };

  std::vector<double> mesh{0.0, t};
  for (Lead l : kLeads) {
    const LeadBias& b = bias_.lead(l);
    if (b.kind == LeadBias::Kind::SmoothStep) {
      const double edge = t - 20.0 * b.rise_time;
      if (edge > 0.0) mesh.push_back(edge);
    } else if (b.kind == LeadBias::Kind::Tabulated) {
      for (double x : b.times) {
        if (t - x > 0.0 && t - x < t) mesh.push_back(t - x);
      }
    }
  }
  std::sort(mesh.begin(), mesh.end());
  mesh.erase(std::unique(mesh.begin(), mesh.end()), mesh.end());

  const auto& x = Rule::abscissa();
  const auto& w = Rule::weights();
  auto integrate = [&](int refine) {
    CMatrix acc = CMatrix::Zero(n, n);
    for (std::size_t p = 0; p + 1 < mesh.size(); ++p) {
      const double len = mesh[p + 1] - mesh[p];
      const int sub = std::max(1, static_cast<int>(std::ceil(len / kBasePanel))) * refine;
      const double h = len / sub;
      for (int k = 0; k < sub; ++k) {
        const double mid = mesh[p] + (k + 0.5) * h;
        for (std::size_t i = 0; i < x.size(); ++i) {
          const double off = 0.5 * h * x[i];
          CMatrix v = integrand(mid + off);
          if (off != 0.0) v += integrand(mid - off);
          acc += (0.5 * h * w[i]) * v;
        }
      }
    }
    return acc;
  };

  CMatrix prev = integrate(1);
  for (int r = 1, refine = 2; r <= kMaxDoublings; ++r, refine *= 2) {
    CMatrix next = integrate(refine);
    const double change = max_abs(next - prev);
    prev = std::move(next);
    if (change <= tol * std::max(1.0, max_abs(prev))) {
      return -2.0 * lam_a + prev;
    }
  }
  throw Error(ErrorKind::GridTooCoarse, "exact memory integral not converged at t = " + std::to_string(t));
}

CMatrix WblDissipator::k_term(const WblState& s, Lead lead, PPlusKind kind) const {
  // A detached lead has no memory, whatever the device spectrum.
  if (max_abs(model_.lambda(lead)) == 0.0) return CMatrix::Zero(model_.n_orb, model_.n_orb);
  const CMatrix pm = p_minus(s, lead);
  if (kind == PPlusKind::Exact) return pm + pm.adjoint() + k_plus_exact(s, lead);
  const CMatrix p = pm + p_plus_adiabatic(s, lead);
  return p + p.adjoint();
}

DissipatorOutput WblDissipator::dissipator_from_k(const std::array<CMatrix, 2>& k, const CMatrix& sigma) const {
  DissipatorOutput out;
  for (Lead l : kLeads) {
    const std::size_t i = lead_index(l);
    const CMatrix& lam = model_.lambda(l);
    out.k[i] = k[i];
    out.q[i] = k[i] + lam * sigma + sigma * lam;
  }
  return out;
}

DissipatorOutput WblDissipator::dissipator(const WblState& s, const CMatrix& sigma, PPlusKind kind) const {
  return dissipator_from_k({k_term(s, Lead::L, kind), k_term(s, Lead::R, kind)}, sigma);
}

CMatrix WblDissipator::h_settled() const {
  return model_.h0 + rule_.delta_h_settled(bias_, model_.n_orb);
}

CMatrix WblDissipator::p_steady(Lead lead) const {
  const int n = model_.n_orb;
  const double shift = bias_.lead(lead).settled_level_shift();
  const EigenDecomposition ed = eig(h_settled() - kI * lambda_ - shift * CMatrix::Identity(n, n));
  return pref() * resolvent_integral_log_completed(ed, model_.mu0, eps_min_) * model_.lambda(lead);
}

CMatrix WblDissipator::k_steady(Lead lead) const {
  const CMatrix p = p_steady(lead);
  return p + p.adjoint();
}

}  // namespace qtran

#include "qtran/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qtran/error.hpp"
#include "qtran/units.hpp"

namespace qtran {

namespace {

using units::kHbar;

constexpr double kEigLow = -1e-6;
constexpr double kEigHigh = 2.0 + 1e-6;
constexpr std::size_t kCacheSize = 4;

bool all_finite(const CMatrix& m) { return m.allFinite(); }

}  // namespace

const char* to_string(DissipatorKind kind) {
  switch (kind) {
    case DissipatorKind::WblAdiabatic: return "wbl_adiabatic";
    case DissipatorKind::WblExact: return "wbl_exact";
    case DissipatorKind::Cso: return "cso";
  }
  return "wbl_adiabatic";
}

Propagator::Propagator(DeviceModel model, BiasProfile bias, InducedFockRule rule, PropagatorOptions options)
    : wbl_(std::move(model), std::move(bias), std::move(rule), options.eps_min), opt_(options) {
  if (!(opt_.dt > 0.0) || !(opt_.t_end > 0.0) || opt_.decimation < 1) {
    throw Error(ErrorKind::ValidationError, "dt, t_end and decimation must be positive");
  }
  if (opt_.kind == DissipatorKind::Cso) {
    const DeviceModel& m = wbl_.model();
    h_cso_ = wbl_.h_settled();
    auto transforms = [&](const CMatrix& h) {
      std::array<CausalityTransforms, 2> ct;
      for (Lead l : kLeads) {
        const double shift = wbl_.bias().lead(l).settled_level_shift();
        ct[lead_index(l)] = causality_transforms(h, m.lambda(l), symmetric_window(m.mu0, opt_.eps_min, shift));
      }
      return ct;
    };
    cso_ = transforms(h_cso_);
    if (opt_.scba) cso_ = transforms(scba_dressed_h(h_cso_, cso_));
  }
}

SimState Propagator::initial_state() const {
  return SimState{0.0, ground_state_density(wbl_.model(), opt_.eps_min).sigma0};
}

CMatrix Propagator::h_at(double t) const {
  if (opt_.kind == DissipatorKind::Cso) return h_cso_;
  const DeviceModel& m = wbl_.model();
  return m.h0 + wbl_.rule().delta_h(wbl_.bias(), t, m.n_orb);
}

const std::array<CMatrix, 2>& Propagator::k_at(double t) {
  for (const auto& entry : k_cache_) {
    if (entry.first == t) return entry.second;
  }
  const PPlusKind kind = opt_.kind == DissipatorKind::WblExact ? PPlusKind::Exact : PPlusKind::Adiabatic;
  const WblState s = wbl_.state_at(t);
  std::array<CMatrix, 2> k{wbl_.k_term(s, Lead::L, kind), wbl_.k_term(s, Lead::R, kind)};
  for (const CMatrix& x : k) diag_.max_k_hermiticity = std::max(diag_.max_k_hermiticity, hermiticity_defect(x));
  if (k_cache_.size() >= kCacheSize) k_cache_.erase(k_cache_.begin());
  k_cache_.emplace_back(t, std::move(k));
  return k_cache_.back().second;
}

DissipatorOutput Propagator::dissipation(double t, const CMatrix& sigma) {
  if (opt_.kind == DissipatorKind::Cso) {
    DissipatorOutput out;
    for (Lead l : kLeads) {
      const std::size_t i = lead_index(l);
      out.q[i] = cso_q(sigma, cso_[i]);
      out.k[i] = CMatrix::Zero(sigma.rows(), sigma.cols());
    }
    return out;
  }
  return wbl_.dissipator_from_k(k_at(t), sigma);
}

Propagator::Flux Propagator::evaluate(double t, const CMatrix& sigma) {
  const CMatrix h = h_at(t);
  const DissipatorOutput d = dissipation(t, sigma);
  Flux f;
  f.rhs = (-kI * (h * sigma - sigma * h) - d.q[0] - d.q[1]) / kHbar;
  f.j_sum = -(d.q[0].trace() + d.q[1].trace()).real();
  return f;
}

SimState Propagator::step(const SimState& s, double dt) {
  const double t = s.t;
  const Flux k1 = evaluate(t, s.sigma);
  const Flux k2 = evaluate(t + 0.5 * dt, s.sigma + (0.5 * dt) * k1.rhs);
  const Flux k3 = evaluate(t + 0.5 * dt, s.sigma + (0.5 * dt) * k2.rhs);
  const Flux k4 = evaluate(t + dt, s.sigma + dt * k3.rhs);

  SimState next;
  next.t = t + dt;
  next.sigma = s.sigma + (dt / 6.0) * (k1.rhs + 2.0 * k2.rhs + 2.0 * k3.rhs + k4.rhs);
  if (!all_finite(next.sigma)) {
    throw Error(ErrorKind::NonFinite, "non-finite density matrix after step at t = " + std::to_string(t) + " fs");
  }

  last_flux_ = (k1.j_sum + 2.0 * k2.j_sum + 2.0 * k3.j_sum + k4.j_sum) / (6.0 * kHbar);
  const double dtrace = (next.sigma.trace() - s.sigma.trace()).real() / dt;
  diag_.max_continuity_residual = std::max(diag_.max_continuity_residual, std::abs(dtrace - last_flux_));

  diag_.max_hermiticity_drift = std::max(diag_.max_hermiticity_drift, hermiticity_defect(next.sigma));
  next.sigma = hermitian_part(next.sigma);
  diag_.max_hermiticity_after = std::max(diag_.max_hermiticity_after, hermiticity_defect(next.sigma));

  Eigen::SelfAdjointEigenSolver<CMatrix> solver(next.sigma, Eigen::EigenvaluesOnly);
  const double lo = solver.eigenvalues().minCoeff();
  const double hi = solver.eigenvalues().maxCoeff();
  diag_.min_eigenvalue = std::min(diag_.min_eigenvalue, lo);
  diag_.max_eigenvalue = std::max(diag_.max_eigenvalue, hi);
  if (lo < kEigLow || hi > kEigHigh) {
    throw Error(ErrorKind::StateCorrupt, "occupation eigenvalue left [0, 2] at t = " + std::to_string(next.t) +
                                             " fs (last good state at t = " + std::to_string(t) + " fs)");
  }
  ++diag_.steps;
  return next;
}

TraceRecord Propagator::run() { return run_from(initial_state()); }

TraceRecord Propagator::run_from(SimState s) {
  const int n = wbl_.model().n_orb;
  diag_ = RunDiagnostics{};
  {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian_part(s.sigma), Eigen::EigenvaluesOnly);
    diag_.min_eigenvalue = solver.eigenvalues().minCoeff();
    diag_.max_eigenvalue = solver.eigenvalues().maxCoeff();
  }
  TraceRecord rec;
  rec.occupations.assign(n, {});
  auto sample = [&](const SimState& st) {
    const DissipatorOutput d = dissipation(st.t, st.sigma);
    rec.times.push_back(st.t);
    rec.j_L.push_back(units::to_micro_amp(-d.q[0].trace().real()));
    rec.j_R.push_back(units::to_micro_amp(-d.q[1].trace().real()));
    rec.trace_sigma.push_back(st.sigma.trace().real());
    for (int i = 0; i < n; ++i) rec.occupations[i].push_back(st.sigma(i, i).real());
  };

  const long steps = std::lround(opt_.t_end / opt_.dt);
  const double t0 = s.t;
  sample(s);
  for (long k = 1; k <= steps; ++k) {
    SimState next = step(s, opt_.dt);
    next.t = t0 + k * opt_.dt;
    s = std::move(next);
    if (k % opt_.decimation == 0 || k == steps) sample(s);
  }
  rec.diagnostics = diag_;
  rec.final_state = s;
  return rec;
}

std::optional<double> settling_time(const TraceRecord& rec, double window, double threshold) {
  const std::size_t n = rec.size();
  if (n < 3) return std::nullopt;
  std::vector<double> rate(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t a = i == 0 ? 0 : i - 1;
    const std::size_t b = i + 1 == n ? n - 1 : i + 1;
    const double dt = rec.times[b] - rec.times[a];
    rate[i] = std::max(std::abs(rec.j_L[b] - rec.j_L[a]), std::abs(rec.j_R[b] - rec.j_R[a])) / dt;
  }
  std::size_t start = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (rate[i] >= threshold) {
      start = i + 1;
      continue;
    }
    if (start < n && rec.times[i] - rec.times[start] >= window) return rec.times[start];
  }
  return std::nullopt;
}

}  // namespace qtran

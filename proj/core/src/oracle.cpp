#include "qtran/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qtran/error.hpp"
#include "qtran/units.hpp"

namespace qtran {

namespace {

using units::kHbar;

constexpr double kTieTolerance = 1e-10;
constexpr double kSettledTolerance = 1e-14;

struct FullSystem {
  int nd = 0;
  Eigen::Index nl = 0;
  Eigen::Index nr = 0;
  CMatrix c_L;
  CMatrix c_R;
  Eigen::VectorXd eps_L;
  Eigen::VectorXd eps_R;
  // Thin SVD of [c_L c_R].
  CMatrix u;
  CMatrix w;
  Eigen::VectorXd s;

  Eigen::Index n() const { return nd + nl + nr; }
};

FullSystem assemble(const DeviceModel& model, const DiscretizedLead& left, const DiscretizedLead& right) {
  FullSystem sys;
  sys.nd = model.n_orb;
  sys.nl = left.states();
  sys.nr = right.states();
  if (left.coupling.rows() != sys.nd || right.coupling.rows() != sys.nd) {
    throw Error(ErrorKind::DimensionMismatch, "lead coupling rows must match the device dimension");
  }
  sys.c_L = left.coupling;
  sys.c_R = right.coupling;
  sys.eps_L = left.energies;
  sys.eps_R = right.energies;
  CMatrix c(sys.nd, sys.nl + sys.nr);
  c << sys.c_L, sys.c_R;
  Eigen::JacobiSVD<CMatrix> svd(c, Eigen::ComputeThinU | Eigen::ComputeThinV);
  sys.u = svd.matrixU();
  sys.w = svd.matrixV();
  sys.s = svd.singularValues();
  return sys;
}

CMatrix device_block(const DeviceModel& model, const BiasProfile& bias, const InducedFockRule& rule, double t) {
  return model.h0 + rule.delta_h(bias, t, model.n_orb);
}

CMatrix full_hamiltonian(const FullSystem& sys, const DeviceModel& model, const BiasProfile& bias,
                         const InducedFockRule& rule, double t) {
  const Eigen::Index n = sys.n();
  CMatrix h = CMatrix::Zero(n, n);
  h.topLeftCorner(sys.nd, sys.nd) = device_block(model, bias, rule, t);
  const double sl = bias.left.level_shift(t);
  const double sr = bias.right.level_shift(t);
  for (Eigen::Index k = 0; k < sys.nl; ++k) h(sys.nd + k, sys.nd + k) = sys.eps_L(k) + sl;
  for (Eigen::Index k = 0; k < sys.nr; ++k) h(sys.nd + sys.nl + k, sys.nd + sys.nl + k) = sys.eps_R(k) + sr;
  h.block(0, sys.nd, sys.nd, sys.nl) = sys.c_L;
  h.block(0, sys.nd + sys.nl, sys.nd, sys.nr) = sys.c_R;
  h.block(sys.nd, 0, sys.nl, sys.nd) = sys.c_L.adjoint();
  h.block(sys.nd + sys.nl, 0, sys.nr, sys.nd) = sys.c_R.adjoint();
  return h;
}

double fill(double e, double mu, FermiTiePolicy tie) {
  if (std::abs(e - mu) <= kTieTolerance * std::max(1.0, std::abs(mu))) {
    if (tie == FermiTiePolicy::Error) {
      throw Error(ErrorKind::DegenerateFermiLevel, "a single-particle level sits at the Fermi energy");
    }
    return 1.0;
  }
  return e < mu ? 2.0 : 0.0;
}

// Occupied orbitals (columns) and their spin-summed weights.
struct Orbitals {
  CMatrix phi;
  Eigen::VectorXd w;
};

Orbitals keep_occupied(const CMatrix& vectors, const Eigen::VectorXd& energies, double mu, FermiTiePolicy tie) {
  std::vector<Eigen::Index> cols;
  std::vector<double> weights;
  for (Eigen::Index k = 0; k < energies.size(); ++k) {
    const double f = fill(energies(k), mu, tie);
    if (f > 0.0) {
      cols.push_back(k);
      weights.push_back(f);
    }
  }
  Orbitals o;
  o.phi.resize(vectors.rows(), static_cast<Eigen::Index>(cols.size()));
  o.w.resize(static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    o.phi.col(static_cast<Eigen::Index>(j)) = vectors.col(cols[j]);
    o.w(static_cast<Eigen::Index>(j)) = weights[j];
  }
  return o;
}

Orbitals initial_orbitals(const FullSystem& sys, const DeviceModel& model, const BiasProfile& bias,
                          const InducedFockRule& rule, const OracleOptions& opt) {
  const Eigen::Index n = sys.n();
  if (opt.init == OracleInit::PartitionFree) {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(full_hamiltonian(sys, model, bias, rule, 0.0));
    return keep_occupied(solver.eigenvectors(), solver.eigenvalues(), model.mu0, opt.tie);
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> dev(device_block(model, bias, rule, 0.0));
  CMatrix vectors = CMatrix::Zero(n, n);
  Eigen::VectorXd energies(n);
  vectors.topLeftCorner(sys.nd, sys.nd) = dev.eigenvectors();
  energies.head(sys.nd) = dev.eigenvalues();
  for (Eigen::Index k = sys.nd; k < n; ++k) vectors(k, k) = 1.0;
  energies.segment(sys.nd, sys.nl) = sys.eps_L.array() + bias.left.level_shift(0.0);
  energies.tail(sys.nr) = sys.eps_R.array() + bias.right.level_shift(0.0);
  return keep_occupied(vectors, energies, model.mu0, opt.tie);
}

bool hamiltonian_settled(const BiasProfile& bias, const InducedFockRule& rule, double t) {
  for (Lead l : kLeads) {
    const LeadBias& b = bias.lead(l);
    if (b.kind == LeadBias::Kind::Tabulated && t < b.times.back()) return false;
    const double target = b.settled_level_shift();
    if (std::abs(b.level_shift(t) - target) > kSettledTolerance * std::max(1.0, std::abs(target))) return false;
  }
  return rule.kind != InducedFockRule::Kind::Tabulated || t >= rule.times.back();
}

// exp(-i D tau) with D the block-diagonal part of H(t), applied in place.
void apply_diagonal_part(const FullSystem& sys, const DeviceModel& model, const BiasProfile& bias,
                         const InducedFockRule& rule, double t, double tau, CMatrix& phi) {
  const CMatrix ud = expm(-kI * device_block(model, bias, rule, t) * tau);
  phi.topRows(sys.nd) = (ud * phi.topRows(sys.nd)).eval();
  const double sl = bias.left.level_shift(t);
  const double sr = bias.right.level_shift(t);
  for (Eigen::Index k = 0; k < sys.nl; ++k) phi.row(sys.nd + k) *= std::exp(-kI * (sys.eps_L(k) + sl) * tau);
  for (Eigen::Index k = 0; k < sys.nr; ++k) {
    phi.row(sys.nd + sys.nl + k) *= std::exp(-kI * (sys.eps_R(k) + sr) * tau);
  }
}

// exp(-i V tau) for the constant device-lead coupling V, through the thin SVD.
void apply_coupling(const FullSystem& sys, double tau, CMatrix& phi) {
  const Eigen::Index nb = sys.nl + sys.nr;
  const CMatrix ud = sys.u.adjoint() * phi.topRows(sys.nd);
  const CMatrix wb = sys.w.adjoint() * phi.bottomRows(nb);
  const Eigen::VectorXd st = sys.s * tau;
  const Eigen::VectorXd cm1 = st.array().cos() - 1.0;
  const Eigen::VectorXd sn = st.array().sin();
  phi.topRows(sys.nd) += sys.u * (cm1.asDiagonal() * ud) - kI * (sys.u * (sn.asDiagonal() * wb));
  phi.bottomRows(nb) += sys.w * (cm1.asDiagonal() * wb) - kI * (sys.w * (sn.asDiagonal() * ud));
}

struct Sample {
  double j_L = 0.0;  // e eV / hbar
  double j_R = 0.0;
  CMatrix sigma_d;
};

Sample sample_orbitals(const FullSystem& sys, const Orbitals& o) {
  const CMatrix pd = o.phi.topRows(sys.nd);
  const CMatrix wd = pd * o.w.asDiagonal();
  Sample s;
  s.sigma_d = wd * pd.adjoint();
  s.j_L = 2.0 * wd.conjugate().cwiseProduct(sys.c_L * o.phi.middleRows(sys.nd, sys.nl)).sum().imag();
  s.j_R = 2.0 * wd.conjugate().cwiseProduct(sys.c_R * o.phi.bottomRows(sys.nr)).sum().imag();
  return s;
}

// Exact evolution under a constant Hamiltonian, evaluated in its eigenbasis.
struct StationaryEvolution {
  double t0 = 0.0;
  Eigen::VectorXd e;
  CMatrix vd;   // device rows of the eigenvectors
  CMatrix m;    // c w c^dagger in the eigenbasis
  CMatrix g_L;  // B^T o M with B = V_D^dagger C_alpha V_alpha
  CMatrix g_R;

  Sample at(double t) const {
    const CVector ph = (-kI * e * ((t - t0) / kHbar)).array().exp().matrix();
    Sample s;
    s.j_L = 2.0 * (ph.transpose() * g_L * ph.conjugate())(0, 0).imag();
    s.j_R = 2.0 * (ph.transpose() * g_R * ph.conjugate())(0, 0).imag();
    const CMatrix vp = vd * ph.asDiagonal();
    s.sigma_d = vp * m * vp.adjoint();
    return s;
  }
};

StationaryEvolution make_stationary(const FullSystem& sys, const CMatrix& h, const Orbitals& o, double t0) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
  const CMatrix& v = solver.eigenvectors();
  StationaryEvolution ev;
  ev.t0 = t0;
  ev.e = solver.eigenvalues();
  ev.vd = v.topRows(sys.nd);
  const CMatrix c = v.adjoint() * o.phi;
  ev.m = c * o.w.asDiagonal() * c.adjoint();
  const CMatrix b_L = ev.vd.adjoint() * (sys.c_L * v.middleRows(sys.nd, sys.nl));
  const CMatrix b_R = ev.vd.adjoint() * (sys.c_R * v.bottomRows(sys.nr));
  ev.g_L = b_L.transpose().cwiseProduct(ev.m);
  ev.g_R = b_R.transpose().cwiseProduct(ev.m);
  return ev;
}

}  // namespace

DiscretizedLead discretize_lead(const CMatrix& target_lambda, double W, int n, double mu0) {
  require_square(target_lambda, "target line-width");
  if (!(W > 0.0) || n < 10) throw Error(ErrorKind::InvalidModel, "discretized lead needs W > 0 and n >= 10");
  if (hermiticity_defect(target_lambda) > 1e-12) throw Error(ErrorKind::NotPsd, "line-width not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(target_lambda);
  const Eigen::VectorXd& lam = solver.eigenvalues();
  if (lam.minCoeff() < -1e-12) throw Error(ErrorKind::NotPsd, "line-width not positive semidefinite");
  const double scale = std::max(1.0, lam.cwiseAbs().maxCoeff());
  std::vector<Eigen::Index> dirs;
  for (Eigen::Index j = 0; j < lam.size(); ++j) {
    if (lam(j) > 1e-14 * scale) dirs.push_back(j);
  }
  DiscretizedLead lead;
  lead.n_levels = n;
  lead.bandwidth = W;
  lead.mu0 = mu0;
  lead.channels = static_cast<int>(dirs.size());
  const Eigen::Index states = static_cast<Eigen::Index>(dirs.size()) * n;
  lead.energies.resize(states);
  lead.coupling = CMatrix::Zero(target_lambda.rows(), states);
  const double de = W / n;
  for (std::size_t c = 0; c < dirs.size(); ++c) {
    const double amp = std::sqrt(lam(dirs[c]) * W / (M_PI * n));
    for (int k = 0; k < n; ++k) {
      const Eigen::Index idx = static_cast<Eigen::Index>(c) * n + k;
      lead.energies(idx) = mu0 - 0.5 * W + (k + 0.5) * de;
      lead.coupling.col(idx) = amp * solver.eigenvectors().col(dirs[c]);
    }
  }
  return lead;
}

CMatrix implied_linewidth(const DiscretizedLead& lead) {
  // Every level of a channel carries the same hopping, so pi (n/W) v v^dagger per channel.
  return (M_PI / lead.bandwidth) * lead.coupling * lead.coupling.adjoint();
}

double recurrence_time(const DiscretizedLead& lead) {
  return 2.0 * M_PI * kHbar * lead.n_levels / lead.bandwidth;
}

TraceRecord propagate_full(const DeviceModel& model, const DiscretizedLead& left, const DiscretizedLead& right,
                           const BiasProfile& bias, const InducedFockRule& rule, const OracleOptions& opt) {
  model.validate();
  if (!(opt.dt > 0.0) || !(opt.t_end > 0.0) || opt.decimation < 1) {
    throw Error(ErrorKind::ValidationError, "dt, t_end and decimation must be positive");
  }
  const FullSystem sys = assemble(model, left, right);
  if (sys.n() > opt.max_dimension) {
    throw Error(ErrorKind::DimensionTooLarge,
                "full system dimension " + std::to_string(sys.n()) + " exceeds " + std::to_string(opt.max_dimension));
  }
  Orbitals orb = initial_orbitals(sys, model, bias, rule, opt);

  TraceRecord rec;
  rec.occupations.assign(sys.nd, {});
  auto record = [&](double t, const Sample& s) {
    rec.times.push_back(t);
    rec.j_L.push_back(units::to_micro_amp(s.j_L));
    rec.j_R.push_back(units::to_micro_amp(s.j_R));
    rec.trace_sigma.push_back(s.sigma_d.trace().real());
    for (int i = 0; i < sys.nd; ++i) rec.occupations[i].push_back(s.sigma_d(i, i).real());
    rec.final_state = SimState{t, s.sigma_d};
  };

  const long steps = std::lround(opt.t_end / opt.dt);
  std::optional<StationaryEvolution> stationary;
  const double tau = opt.dt / kHbar;
  for (long k = 0; k <= steps; ++k) {
    const double t = k * opt.dt;
    if (!stationary && hamiltonian_settled(bias, rule, t)) {
      stationary = make_stationary(sys, full_hamiltonian(sys, model, bias, rule, t), orb, t);
    }
    if (k % opt.decimation == 0 || k == steps) record(t, stationary ? stationary->at(t) : sample_orbitals(sys, orb));
    if (k == steps || stationary) continue;
    const double mid = t + 0.5 * opt.dt;
    apply_diagonal_part(sys, model, bias, rule, mid, 0.5 * tau, orb.phi);
    apply_coupling(sys, tau, orb.phi);
    apply_diagonal_part(sys, model, bias, rule, mid, 0.5 * tau, orb.phi);
    if (!orb.phi.allFinite()) throw Error(ErrorKind::NonFinite, "non-finite oracle state");
  }
  rec.diagnostics.steps = static_cast<int>(steps);
  return rec;
}

SchemeComparison compare_schemes(const DeviceModel& model, const DiscretizedLead& left,
                                 const DiscretizedLead& right, const BiasProfile& bias,
                                 const InducedFockRule& rule, OracleOptions options, double equilibration) {
  SchemeComparison out;
  options.init = OracleInit::Partitioned;
  out.partitioned = propagate_full(model, left, right, bias, rule, options);
  options.init = OracleInit::PartitionFree;
  out.partition_free = propagate_full(model, left, right, bias, rule, options);

  const TraceRecord& a = out.partitioned;
  const TraceRecord& b = out.partition_free;
  const double t_end = a.times.back();
  double sum_a = 0.0;
  double sum_b = 0.0;
  int count = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    out.max_partition_free_current =
        std::max({out.max_partition_free_current, std::abs(b.j_L[i]), std::abs(b.j_R[i])});
    if (a.times[i] >= equilibration) {
      out.max_difference_after_window = std::max(
          {out.max_difference_after_window, std::abs(a.j_L[i] - b.j_L[i]), std::abs(a.j_R[i] - b.j_R[i])});
    }
    if (a.times[i] >= 0.75 * t_end) {
      sum_a += a.j_R[i];
      sum_b += b.j_R[i];
      ++count;
    }
  }
  out.steady_partitioned = count ? sum_a / count : 0.0;
  out.steady_partition_free = count ? sum_b / count : 0.0;
  const double ref = std::max(std::abs(out.steady_partition_free), 1e-300);
  out.relative_steady_difference = std::abs(out.steady_partitioned - out.steady_partition_free) / ref;
  return out;
}

namespace {

double interpolate(const std::vector<double>& t, const std::vector<double>& y, double x) {
  if (x <= t.front()) return y.front();
  if (x >= t.back()) return y.back();
  const auto it = std::upper_bound(t.begin(), t.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - t.begin());
  const double w = (x - t[i - 1]) / (t[i] - t[i - 1]);
  return (1.0 - w) * y[i - 1] + w * y[i];
}

}  // namespace

TraceDeviation trace_deviation(const TraceRecord& reference, const TraceRecord& test, double t_max) {
  if (reference.size() == 0 || test.size() == 0) throw Error(ErrorKind::DimensionMismatch, "empty trace");
  TraceDeviation out;
  for (std::size_t i = 0; i < reference.size() && reference.times[i] <= t_max; ++i) {
    const double t = reference.times[i];
    out.reference_peak = std::max({out.reference_peak, std::abs(reference.j_L[i]), std::abs(reference.j_R[i])});
    const double d = std::max(std::abs(interpolate(test.times, test.j_L, t) - reference.j_L[i]),
                              std::abs(interpolate(test.times, test.j_R, t) - reference.j_R[i]));
    if (d > out.max_abs) {
      out.max_abs = d;
      out.at_time = t;
    }
    ++out.samples;
  }
  out.max_relative = out.reference_peak > 0.0 ? out.max_abs / out.reference_peak : 0.0;
  return out;
}

}  // namespace qtran

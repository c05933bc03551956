#include "qtran/runner.hpp"

#include <filesystem>
#include <fstream>
#include <future>
#include <ostream>
#include <sstream>

#include "qtran/error.hpp"
#include "qtran/ground_state.hpp"
#include "qtran/oracle.hpp"
#include "qtran/steady_state.hpp"
#include "qtran/trace_io.hpp"
#include "qtran/verify.hpp"

namespace qtran {

namespace {

namespace fs = std::filesystem;

constexpr std::pair<Subcommand, const char*> kNames[] = {
    {Subcommand::GroundState, "ground-state"}, {Subcommand::Propagate, "propagate"},
    {Subcommand::Steady, "steady"},            {Subcommand::Transmission, "transmission"},
    {Subcommand::Oracle, "oracle"},            {Subcommand::Verify, "verify"},
};

// Writes to a file when a path is given, else to the fallback stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : path_(path) {
    if (path.empty()) {
      os_ = &fallback;
      return;
    }
    file_.open(path);
    if (!file_) throw Error(ErrorKind::IoError, "cannot open " + path + " for writing");
    os_ = &file_;
  }
  std::ostream& stream() { return *os_; }
  void close() {
    if (!file_.is_open()) return;
    file_.close();
    if (!file_) throw Error(ErrorKind::IoError, "write failed for " + path_);
  }

 private:
  std::string path_;
  std::ofstream file_;
  std::ostream* os_ = nullptr;
};

std::string entry_path(const std::string& out_path, std::size_t index) {
  fs::path p(out_path);
  fs::path name = p.stem();
  name += "_" + std::to_string(index);
  name += p.extension();
  return (p.parent_path() / name).string();
}

void ground_state(const RunConfig& cfg, const std::string& out_path, std::ostream& out) {
  const DeviceModel model = cfg.model.build();
  const GroundState gs = ground_state_density(model, effective_eps_min(cfg));
  Sink sink(out_path, out);
  std::ostream& os = sink.stream();
  os << "mu0 " << format_double(gs.mu0) << "\n";
  os << "trace " << format_double(gs.sigma0.trace().real()) << "\n";
  os << "occupations";
  for (Eigen::Index i = 0; i < gs.sigma0.rows(); ++i) os << ' ' << format_double(gs.sigma0(i, i).real());
  os << "\nsigma0\n";
  for (Eigen::Index i = 0; i < gs.sigma0.rows(); ++i) {
    for (Eigen::Index j = 0; j < gs.sigma0.cols(); ++j) {
      os << (j ? " " : "") << format_double(gs.sigma0(i, j).real()) << (gs.sigma0(i, j).imag() < 0 ? "" : "+")
         << format_double(gs.sigma0(i, j).imag()) << "i";
    }
    os << "\n";
  }
  sink.close();
}

void propagate(const RunConfig& cfg, const std::string& out_path, std::ostream& out) {
  Propagator prop(cfg.model.build(), cfg.bias, cfg.rule, cfg.propagator_options());
  TraceRecord rec = prop.run();
  rec.meta = serialize_config(cfg);
  if (out_path.empty()) {
    write_csv(out, rec);
    return;
  }
  write_csv(fs::path(out_path), rec);
  write_gnuplot(fs::path(out_path));
}

void steady(const RunConfig& cfg, const std::string& out_path, std::ostream& out) {
  const DeviceModel model = cfg.model.build();
  Sink sink(out_path, out);
  std::ostream& os = sink.stream();
  if (cfg.iv_voltages.empty()) {
    const SteadyCurrent j = steady_current(model, cfg.bias, cfg.rule);
    os << "J_L_uA " << format_double(j.j_L_uA) << "\n";
    os << "J_R_uA " << format_double(j.j_R_uA) << "\n";
  } else {
    os << "V_R,J_L_uA,J_R_uA\n";
    for (double v : cfg.iv_voltages) {
      BiasProfile bias = cfg.bias;
      bias.right = LeadBias::smooth_step(v, cfg.bias.right.rise_time);
      const SteadyCurrent j = steady_current(model, bias, cfg.rule);
      os << format_double(v) << ',' << format_double(j.j_L_uA) << ',' << format_double(j.j_R_uA) << "\n";
    }
  }
  sink.close();
}

void transmission(const RunConfig& cfg, const std::string& out_path, std::ostream& out) {
  const DeviceModel model = cfg.model.build();
  const CMatrix h_inf = model.h0 + cfg.rule.delta_h_settled(cfg.bias, model.n_orb);
  Sink sink(out_path, out);
  std::ostream& os = sink.stream();
  os << "eps,T_scaled,T_std\n";
  const TransmissionSpec& ts = cfg.transmission;
  for (int i = 0; i < ts.points; ++i) {
    const double e = ts.e_lo + (ts.e_hi - ts.e_lo) * i / (ts.points - 1);
    const Transmission t = transmission_wbl(model, e, h_inf);
    os << format_double(e) << ',' << format_double(t.scaled) << ',' << format_double(t.standard) << "\n";
  }
  sink.close();
}

void oracle(const RunConfig& cfg, const std::string& out_path, std::ostream& out) {
  if (!cfg.oracle) throw Error(ErrorKind::ValidationError, "oracle: section required for the oracle subcommand");
  const OracleSpec& ref = *cfg.oracle;
  const DeviceModel model = cfg.model.build();
  const DiscretizedLead left = discretize_lead(model.lambda_L, ref.bandwidth, ref.levels, model.mu0);
  const DiscretizedLead right = discretize_lead(model.lambda_R, ref.bandwidth, ref.levels, model.mu0);
  OracleOptions oo;
  oo.dt = ref.dt;
  oo.t_end = cfg.t_end;
  oo.decimation = ref.decimation;
  oo.init = ref.init;
  oo.tie = ref.tie;
  TraceRecord full = propagate_full(model, left, right, cfg.bias, cfg.rule, oo);
  full.meta = serialize_config(cfg);
  Propagator prop(model, cfg.bias, cfg.rule, cfg.propagator_options());
  const TraceRecord wbl = prop.run();

  const double window = std::min(cfg.t_end, 0.5 * std::min(recurrence_time(left), recurrence_time(right)));
  const TraceDeviation dev = trace_deviation(wbl, full, window);
  std::ostringstream report;
  report << "bandwidth_eV " << format_double(ref.bandwidth) << "\n"
         << "levels_per_lead " << ref.levels << "\n"
         << "comparison_window_fs " << format_double(window) << "\n"
         << "max_abs_deviation_uA " << format_double(dev.max_abs) << "\n"
         << "max_relative_deviation " << format_double(dev.max_relative) << "\n"
         << "at_time_fs " << format_double(dev.at_time) << "\n";
  if (out_path.empty()) {
    write_csv(out, full);
    std::istringstream lines(report.str());
    for (std::string line; std::getline(lines, line);) out << "# " << line << "\n";
    return;
  }
  write_csv(fs::path(out_path), full);
  write_gnuplot(fs::path(out_path));
  fs::path rp(out_path);
  rp.replace_extension(".report.txt");
  Sink sink(rp.string(), out);
  sink.stream() << report.str();
  sink.close();
  out << report.str();
}

void dispatch(Subcommand cmd, const RunConfig& cfg, const std::string& out_path, std::ostream& out) {
  switch (cmd) {
    case Subcommand::GroundState: return ground_state(cfg, out_path, out);
    case Subcommand::Propagate: return propagate(cfg, out_path, out);
    case Subcommand::Steady: return steady(cfg, out_path, out);
    case Subcommand::Transmission: return transmission(cfg, out_path, out);
    case Subcommand::Oracle: return oracle(cfg, out_path, out);
    case Subcommand::Verify: {
      const auto results = run_acceptance_suite(out);
      for (const auto& r : results) {
        if (!r.pass) throw Error(ErrorKind::ValidationError, "acceptance criterion " + std::to_string(r.id) + " failed");
      }
      return;
    }
  }
}

}  // namespace

std::optional<Subcommand> parse_subcommand(const std::string& name) {
  for (const auto& [cmd, text] : kNames) {
    if (name == text) return cmd;
  }
  return std::nullopt;
}

const char* to_string(Subcommand cmd) {
  for (const auto& [c, text] : kNames) {
    if (c == cmd) return text;
  }
  return "?";
}

void execute(Subcommand cmd, const RunConfig& cfg, const std::string& config_text, const std::string& out_path,
             std::ostream& out) {
  const std::string target = out_path.empty() ? cfg.output : out_path;
  if (cfg.sweep.empty() || cmd == Subcommand::Verify) {
    dispatch(cmd, cfg, target, out);
    return;
  }
  if (target.empty()) throw Error(ErrorKind::ValidationError, "sweep: an output path is required (--out or output)");
  std::vector<std::future<void>> jobs;
  for (std::size_t i = 0; i < cfg.sweep.size(); ++i) {
    RunConfig entry = sweep_entry(config_text, i);
    entry.output.clear();
    const std::string path = entry_path(target, i);
    jobs.push_back(std::async(std::launch::async, [cmd, entry = std::move(entry), path] {
      std::ostringstream sink;
      dispatch(cmd, entry, path, sink);
    }));
  }
  std::exception_ptr first;
  for (auto& job : jobs) {
    try {
      job.get();
    } catch (...) {
      if (!first) first = std::current_exception();
    }
  }
  if (first) std::rethrow_exception(first);
  for (std::size_t i = 0; i < cfg.sweep.size(); ++i) out << entry_path(target, i) << "\n";
}

int run_cli(Subcommand cmd, const std::string& config_path, const std::string& out_path, std::ostream& out,
            std::ostream& err) {
  try {
    if (cmd == Subcommand::Verify) {
      bool ok = true;
      for (const auto& r : run_acceptance_suite(out)) ok = ok && r.pass;
      return ok ? 0 : 1;
    }
    if (config_path.empty()) throw Error(ErrorKind::ValidationError, "--config is required");
    std::ifstream is(config_path);
    if (!is) throw Error(ErrorKind::IoError, "cannot read " + config_path);
    std::stringstream buf;
    buf << is.rdbuf();
    const std::string text = buf.str();
    const RunConfig cfg = parse_config(text);
    execute(cmd, cfg, text, out_path, out);
    return 0;
  } catch (const Error& e) {
    err << to_string(e.category()) << ": " << e.what() << "\n";
    switch (e.category()) {
      case ErrorCategory::Config: return 2;
      case ErrorCategory::Numeric: return 3;
      case ErrorCategory::Io: return 4;
    }
  } catch (const fs::filesystem_error& e) {
    err << "IO: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    err << "NUMERIC: " << e.what() << "\n";
    return 3;
  }
  return 1;
}

}  // namespace qtran

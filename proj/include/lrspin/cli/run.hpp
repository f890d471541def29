#pragma once

#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "lrspin/cli/csv.hpp"
#include "lrspin/cli/track_file.hpp"
#include "lrspin/drive_protocols.hpp"
#include "lrspin/errors.hpp"
#include "lrspin/lr_dynamics.hpp"
#include "lrspin/spectra.hpp"
#include "lrspin/spin_algebra.hpp"

namespace lrspin::cli {

enum ExitStatus : int {
  kOk = 0,
  kInvalidInput = 2,
  kEvaluationError = 3,
  kSolverError = 4,
};

struct RunConfig {
  std::string command;           // fields | track | engineer | verify | levels | crossings | propagate | lz
  std::string model = "model1";  // ignored when track_file is set
  std::string track_file;
  bool literal_track = false;
  double j = 0.5;
  double epsilon = 1.0;
  std::optional<double> t_min;
  std::optional<double> t_max;
  std::optional<int> steps;
  double tol = 1e-10;
  std::string out;  // empty: standard output

  // propagate
  std::optional<double> m;
  std::string initial = "lr";  // lr | basis
  int stride = 1;

  // lz
  double delta = 1.0;
  double nu = 1.0;
};

namespace detail {

struct Grid {
  double lo, hi;
  std::size_t n;
  double at(std::size_t i) const { return lrspin::detail::grid_point(lo, hi, i, n); }
};

inline const std::vector<std::string>& known_commands() {
  static const std::vector<std::string> names{"fields",    "track",     "engineer", "verify",
                                              "levels",    "crossings", "propagate", "lz"};
  return names;
}

class Session {
 public:
  explicit Session(const RunConfig& cfg) : cfg_(cfg) {
    if (!(cfg.epsilon > 0.0) || !std::isfinite(cfg.epsilon)) {
      throw InvalidArgument("--epsilon must be positive");
    }
    if (!(cfg.tol > 0.0)) throw InvalidArgument("--tol must be positive");
    if (cfg.stride < 1) throw InvalidArgument("--stride must be >= 1");
    if (!cfg.track_file.empty()) samples_ = parse_track_file(cfg.track_file);
    t_min_ = cfg.t_min.value_or(samples_ ? samples_->t.front() : -6.0);
    t_max_ = cfg.t_max.value_or(samples_ ? samples_->t.back() : 6.0);
    steps_ = cfg.steps.value_or(1201);
    if (cfg.command != "lz") {
      if (!(t_min_ < t_max_)) throw InvalidArgument("--t-min must be below --t-max");
      if (steps_ < 2) throw InvalidArgument("--steps must be >= 2");
    }
  }

  CsvTable fields() const {
    if (samples_) throw InvalidArgument("fields needs a builtin --model; use engineer for track files");
    const DrivingField field = builtin_field(protocol(), cfg_.epsilon);
    CsvTable table({"t", "omega_x", "omega_z"});
    for_grid([&](double t) {
      const FieldValue v = field(t);
      table.add_row({t, v.omega_x, v.omega_z});
    });
    return table;
  }

  CsvTable track() const {
    const AngleTrack tr = angle_track();
    CsvTable table({"t", "theta", "phi", "alpha_x", "alpha_y", "alpha_z"});
    for_grid([&](double t) {
      const AnglePoint p = tr(t);
      const BlochVector a = invariant_vector(tr, t);
      table.add_row({t, p.theta, p.phi, a.x(), a.y(), a.z()});
    });
    return table;
  }

  CsvTable engineered() const {
    const DrivingField field = engineer(angle_track(), cfg_.epsilon);
    CsvTable table({"t", "omega_x", "omega_z"});
    for_grid([&](double t) {
      const FieldValue v = field(t);
      table.add_row({t, v.omega_x, v.omega_z});
    });
    return table;
  }

  // Residual table plus the max over the grid.
  std::pair<CsvTable, double> verify() const {
    const SpinRepresentation rep = make_spin_rep(cfg_.j);
    const AngleTrack tr = angle_track();
    const DrivingField field = samples_ ? engineer(tr, cfg_.epsilon)
                                        : builtin_field(protocol(), cfg_.epsilon);
    const double h = 1e-5 / cfg_.epsilon;
    double lo = t_min_, hi = t_max_;
    if (samples_) {
      lo = std::max(lo, samples_->t.front() + h);
      hi = std::min(hi, samples_->t.back() - h);
    }
    CsvTable table({"t", "residual"});
    double worst = 0.0;
    const Grid grid{lo, hi, static_cast<std::size_t>(steps_)};
    for (std::size_t i = 0; i < grid.n; ++i) {
      const double t = grid.at(i);
      const double r = invariant_residual(rep, field, tr, t, h);
      worst = std::max(worst, r);
      table.add_row({t, r});
    }
    return {std::move(table), worst};
  }

  CsvTable levels() const {
    const SpinRepresentation rep = make_spin_rep(cfg_.j);
    const AngleTrack tr = angle_track();
    const DrivingField field = samples_ ? engineer(tr, cfg_.epsilon)
                                        : builtin_field(protocol(), cfg_.epsilon);
    std::vector<std::string> header{"t", "f"};
    for (Eigen::Index k = 0; k < rep.dim(); ++k) {
      header.push_back("E_ad_" + format_m(rep.m_at(k)));
      header.push_back("E_" + format_m(rep.m_at(k)));
    }
    CsvTable table(std::move(header));
    for_grid([&](double t) {
      std::vector<double> row{t, overlap_f(field, tr, t)};
      for (Eigen::Index k = 0; k < rep.dim(); ++k) {
        row.push_back(adiabatic_level(field, rep.m_at(k), t));
        row.push_back(nonadiabatic_level(field, tr, rep.m_at(k), t));
      }
      table.add_row(std::move(row));
    });
    return table;
  }

  CsvTable crossings() const {
    const AngleTrack tr = angle_track();
    const DrivingField field = samples_ ? engineer(tr, cfg_.epsilon)
                                        : builtin_field(protocol(), cfg_.epsilon);
    CsvTable table({"t_c", "f_at_tc", "iterations"});
    for (const CrossingEvent& ev : find_crossings(field, tr, t_min_, t_max_,
                                                  static_cast<std::size_t>(steps_), cfg_.tol)) {
      table.add_row({ev.t_c, ev.f_at_tc, static_cast<double>(ev.iterations)});
    }
    return table;
  }

  CsvTable propagate() const {
    const SpinRepresentation rep = make_spin_rep(cfg_.j);
    const AngleTrack tr = angle_track();
    const DrivingField field = samples_ ? engineer(tr, cfg_.epsilon)
                                        : builtin_field(protocol(), cfg_.epsilon);
    const double m = cfg_.m.value_or(rep.j());
    rep.index_of(m);
    QuantumState psi0;
    if (cfg_.initial == "lr") {
      psi0 = lr_eigenstate(rep, tr, m, t_min_);
    } else if (cfg_.initial == "basis") {
      psi0 = rep.basis_state(m);
    } else {
      throw InvalidArgument("--initial must be 'lr' or 'basis'");
    }

    std::vector<std::string> header{"t", "fidelity_vs_LR", "norm"};
    for (Eigen::Index k = 0; k < rep.dim(); ++k) header.push_back("pop_" + format_m(rep.m_at(k)));
    CsvTable table(std::move(header));
    auto record = [&](double t, const QuantumState& psi) {
      if (!psi.allFinite()) throw SolverError("propagation diverged; increase --steps");
      std::vector<double> row{t, fidelity(lr_eigenstate(rep, tr, m, t), psi), psi.norm()};
      for (Eigen::Index k = 0; k < rep.dim(); ++k) row.push_back(std::norm(psi(k)));
      table.add_row(std::move(row));
    };
    record(t_min_, psi0);
    PropagationOptions opts;
    opts.observer = [&](int n, double t, const QuantumState& psi) {
      if (n % cfg_.stride == 0 || n == steps_) record(n == steps_ ? t_max_ : t, psi);
    };
    propagate_schrodinger(rep, field, psi0, t_min_, t_max_, steps_, opts);
    return table;
  }

  CsvTable lz() const {
    const LZParams p{cfg_.delta, cfg_.nu};
    const double formula = lz_probability(p);
    double horizon = 250.0 * p.delta / p.nu;
    if (cfg_.t_min || cfg_.t_max) {
      horizon = std::max(std::abs(cfg_.t_min.value_or(0.0)), std::abs(cfg_.t_max.value_or(0.0)));
    }
    int steps = cfg_.steps.value_or(0);
    if (!cfg_.steps) {
      // Keep |E| dt <= 0.05 at the window edges.
      const double edge = 0.5 * std::hypot(p.delta, p.nu * horizon);
      steps = static_cast<int>(std::ceil(2.0 * horizon * edge / 0.05));
    }
    const double numeric = lz_numeric(p, horizon, steps);
    if (!std::isfinite(numeric)) throw SolverError("propagation diverged; increase --steps");
    CsvTable table({"delta", "nu", "P_formula", "P_numeric", "abs_error"});
    table.add_row({p.delta, p.nu, formula, numeric, std::abs(numeric - formula)});
    return table;
  }

 private:
  ProtocolId protocol() const { return parse_protocol(cfg_.model, cfg_.delta, cfg_.nu); }

  AngleTrack angle_track() const {
    if (samples_) return tabulated_track(*samples_);
    return builtin_track(protocol(), cfg_.epsilon,
                         cfg_.literal_track ? TrackVariant::literal : TrackVariant::corrected);
  }

  template <class F>
  void for_grid(F&& f) const {
    const Grid grid{t_min_, t_max_, static_cast<std::size_t>(steps_)};
    for (std::size_t i = 0; i < grid.n; ++i) f(grid.at(i));
  }

  const RunConfig& cfg_;
  std::optional<TrackSamples> samples_;
  double t_min_ = -6.0, t_max_ = 6.0;
  int steps_ = 1201;
};

inline void produce(const RunConfig& cfg, std::ostream& os) {
  const Session session(cfg);
  const std::string& c = cfg.command;
  if (c == "fields") {
    session.fields().write(os);
  } else if (c == "track") {
    session.track().write(os);
  } else if (c == "engineer") {
    session.engineered().write(os);
  } else if (c == "verify") {
    const auto [table, worst] = session.verify();
    table.write(os);
    os << "max_residual=" << format_number(worst) << '\n';
  } else if (c == "levels") {
    session.levels().write(os);
  } else if (c == "crossings") {
    session.crossings().write(os);
  } else if (c == "propagate") {
    session.propagate().write(os);
  } else if (c == "lz") {
    session.lz().write(os);
  } else {
    throw InvalidArgument("unknown command '" + c + "'");
  }
}

}  // namespace detail

// Runs one command and writes its CSV to cfg.out (or `out` when cfg.out is
// empty). Errors go to `err`; the return value is the process exit status.
inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    std::ostringstream buffer;
    detail::produce(cfg, buffer);
    if (cfg.out.empty()) {
      out << buffer.str();
    } else {
      std::ofstream file(cfg.out, std::ios::binary);
      if (!file) throw InvalidArgument("cannot open output file '" + cfg.out + "'");
      file << buffer.str();
    }
    return kOk;
  } catch (const TimedError& e) {
    err << "error: " << e.what() << '\n';
    return kEvaluationError;
  } catch (const SolverError& e) {
    err << "error: " << e.what() << '\n';
    return kSolverError;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const MalformedSamples& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kSolverError;
  }
}

}  // namespace lrspin::cli

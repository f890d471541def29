#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "lrspin/drive_protocols.hpp"
#include "lrspin/errors.hpp"
#include "lrspin/lr_dynamics.hpp"
#include "lrspin/spin_algebra.hpp"

namespace lrspin {

// E_m^ad(t) = m |Omega(t)|.
inline double adiabatic_level(const DrivingField& field, double m, double t) {
  const FieldValue v = field(t);
  return m * std::hypot(v.omega_x, v.omega_z);
}

// E_m(t) = <psi_m|H|psi_m> = m Omega(t).alpha(t).
inline double nonadiabatic_level(const DrivingField& field, const AngleTrack& track, double m,
                                 double t) {
  return m * field.vector(t).dot(invariant_vector(track, t));
}

// f = alpha . alpha_h, in [-1, 1].
inline double overlap_f(const DrivingField& field, const AngleTrack& track, double t) {
  return field_orientation(field, t).dot(invariant_vector(track, t));
}

// tr[I(t) H(t)] = (Omega.alpha) j(j+1)(2j+1)/3.
inline double frobenius_certificate(const SpinRepresentation& rep, const DrivingField& field,
                                    const AngleTrack& track, double t) {
  return frobenius_inner(invariant_operator(rep, track, t), hamiltonian(rep, field, t)).real();
}

struct CrossingEvent {
  double t_c = 0.0;
  double f_at_tc = 0.0;
  std::pair<double, double> bracket{0.0, 0.0};
  int iterations = 0;
};

namespace detail {

inline int sign_of(double x) { return (x > 0.0) - (x < 0.0); }

// Grid point i of n on [lo, hi] with both endpoints exact.
inline double grid_point(double lo, double hi, std::size_t i, std::size_t n) {
  const double k = static_cast<double>(i), last = static_cast<double>(n - 1);
  return ((last - k) * lo + k * hi) / last;
}

}  // namespace detail

// Scans g(t) = Omega.alpha on a uniform grid, brackets every sign change and
// bisects it down to |b - a| <= tol. Grid points where g is exactly zero count
// as crossings when the sign differs on either side.
inline std::vector<CrossingEvent> find_crossings(const DrivingField& field,
                                                 const AngleTrack& track, double t_min,
                                                 double t_max, std::size_t grid_points,
                                                 double tol) {
  if (!(t_min < t_max)) throw InvalidArgument("find_crossings requires t_min < t_max");
  if (grid_points < 16) throw InvalidArgument("find_crossings requires >= 16 grid points");
  if (!(tol > 0.0)) throw InvalidArgument("tolerance must be positive");

  auto g = [&](double t) { return field.vector(t).dot(invariant_vector(track, t)); };

  std::vector<double> ts(grid_points), gs(grid_points);
  for (std::size_t i = 0; i < grid_points; ++i) {
    ts[i] = detail::grid_point(t_min, t_max, i, grid_points);
    gs[i] = g(ts[i]);
  }

  std::vector<CrossingEvent> events;
  auto finish = [&](CrossingEvent ev) {
    ev.f_at_tc = overlap_f(field, track, ev.t_c);
    events.push_back(ev);
  };

  std::size_t i = 0;
  while (i + 1 < grid_points) {
    const int s0 = detail::sign_of(gs[i]);
    if (s0 == 0) {
      ++i;
      continue;
    }
    // Skip over a run of exact zeros to the next signed sample.
    std::size_t k = i + 1;
    while (k < grid_points && detail::sign_of(gs[k]) == 0) ++k;
    if (k == grid_points) break;
    const int s1 = detail::sign_of(gs[k]);
    if (s0 != s1) {
      CrossingEvent ev;
      if (k > i + 1) {
        ev.t_c = ts[i + 1];
        ev.bracket = {ts[i], ts[k]};
      } else {
        double a = ts[i], b = ts[k];
        while (b - a > tol) {
          const double mid = 0.5 * (a + b);
          if (mid <= a || mid >= b) break;
          const double gm = g(mid);
          ++ev.iterations;
          const int sm = detail::sign_of(gm);
          if (sm == 0) {
            a = b = mid;
            break;
          }
          (sm == s0 ? a : b) = mid;
        }
        ev.t_c = 0.5 * (a + b);
        ev.bracket = {a, b};
      }
      finish(ev);
    }
    i = k;
  }
  return events;
}

struct AnomalyReport {
  double f_minus = 0.0;
  double f_plus = 0.0;
  std::vector<CrossingEvent> crossings;
  bool anomalous = false;
  double delta = 0.0;
};

struct AnomalyOptions {
  std::size_t grid_points = 4001;
  double tol = 1e-10;
};

// Parallel at -T (f > 1 - delta) and antiparallel at +T (f < -(1 - delta)).
inline AnomalyReport classify_anomaly(const DrivingField& field, const AngleTrack& track,
                                      double horizon, double delta,
                                      const AnomalyOptions& opts = {}) {
  if (!(horizon > 0.0)) throw InvalidArgument("horizon T must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("delta must lie in (0, 1)");
  AnomalyReport report;
  report.delta = delta;
  report.f_minus = overlap_f(field, track, -horizon);
  report.f_plus = overlap_f(field, track, horizon);
  report.crossings = find_crossings(field, track, -horizon, horizon, opts.grid_points, opts.tol);
  report.anomalous = report.f_minus > 1.0 - delta && report.f_plus < -(1.0 - delta);
  return report;
}

struct LZParams {
  double delta = 1.0;  // coupling
  double nu = 1.0;     // sweep rate
};

inline double lz_probability(const LZParams& p) {
  if (!(p.delta > 0.0) || !(p.nu > 0.0)) throw InvalidArgument("LZ parameters must be positive");
  return std::exp(-kPi * p.delta * p.delta / (2.0 * p.nu));
}

// Diabatic survival of |+1/2> under Omega = (Delta, 0, nu t) over [-T, T].
inline double lz_numeric(const LZParams& p, double horizon, int steps) {
  if (!(p.delta > 0.0) || !(p.nu > 0.0)) throw InvalidArgument("LZ parameters must be positive");
  if (!(p.nu * horizon >= 50.0 * p.delta)) {
    throw WindowTooSmall("LZ window requires nu T >= 50 Delta");
  }
  const SpinRepresentation rep(1);
  const DrivingField field = builtin_field(ProtocolId::lz(p.delta, p.nu), 1.0);
  const PropagationResult r =
      propagate_schrodinger(rep, field, rep.basis_state(0.5), -horizon, horizon, steps);
  return std::norm(r.state(0)) / r.state.squaredNorm();
}

}  // namespace lrspin

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>

#include "lrspin/drive_protocols.hpp"
#include "lrspin/errors.hpp"
#include "lrspin/quadrature.hpp"
#include "lrspin/spin_algebra.hpp"

namespace lrspin {

using BlochVector = Vec3;

// (sin th cos ph, sin th sin ph, cos th), the coefficient vector of I = alpha.J.
inline BlochVector invariant_vector(const AngleTrack& track, double t) {
  const AnglePoint p = track(t);
  return {p.sin_theta * p.cos_phi, p.sin_theta * p.sin_phi, p.cos_theta};
}

inline ComplexMatrix invariant_operator(const SpinRepresentation& rep, const AngleTrack& track,
                                        double t) {
  return spin_operator(rep, invariant_vector(track, t));
}

inline ComplexMatrix hamiltonian(const SpinRepresentation& rep, const DrivingField& field,
                                 double t) {
  return spin_operator(rep, field.vector(t));
}

// || i (I(t+h) - I(t-h)) / 2h - [H(t), I(t)] ||_F; zero for an exact invariant
// up to O(h^2).
inline double invariant_residual(const SpinRepresentation& rep, const DrivingField& field,
                                 const AngleTrack& track, double t, double h) {
  if (!(h > 0.0)) throw InvalidArgument("difference step must be positive");
  const ComplexMatrix rate = Complex(0.0, 1.0 / (2.0 * h)) *
                             (invariant_operator(rep, track, t + h) -
                              invariant_operator(rep, track, t - h));
  const ComplexMatrix comm =
      commutator(hamiltonian(rep, field, t), invariant_operator(rep, track, t));
  return (rate - comm).norm();
}

// d alpha / dt = Omega x alpha.
inline Vec3 precession_rhs(const DrivingField& field, const BlochVector& a, double t) {
  const FieldValue v = field(t);
  return {-v.omega_z * a.y(), v.omega_z * a.x() - v.omega_x * a.z(), v.omega_x * a.y()};
}

struct BlochPropagation {
  BlochVector vector;
  double norm_drift = 0.0;  // max | |alpha| - |alpha_0| | over the steps
  int steps = 0;
};

// Classic fixed-step RK4 on the precession equation.
inline BlochPropagation propagate_bloch(const DrivingField& field, const BlochVector& a0,
                                        double t0, double t1, int steps) {
  if (steps < 1) throw InvalidArgument("steps must be >= 1");
  const double dt = (t1 - t0) / steps;
  const double norm0 = a0.norm();
  BlochPropagation out{a0, 0.0, steps};
  BlochVector& a = out.vector;
  for (int n = 0; n < steps; ++n) {
    const double t = t0 + n * dt;
    const Vec3 k1 = precession_rhs(field, a, t);
    const Vec3 k2 = precession_rhs(field, a + 0.5 * dt * k1, t + 0.5 * dt);
    const Vec3 k3 = precession_rhs(field, a + 0.5 * dt * k2, t + 0.5 * dt);
    const Vec3 k4 = precession_rhs(field, a + dt * k3, t + dt);
    a += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    out.norm_drift = std::max(out.norm_drift, std::abs(a.norm() - norm0));
  }
  return out;
}

// |phi_m(t)> = exp(i(pi - phi) J_z) exp(i theta J_y) |m>, with no rephasing.
inline QuantumState lr_eigenstate(const SpinRepresentation& rep, const AngleTrack& track,
                                  double m, double t) {
  const QuantumState basis = rep.basis_state(m);
  const AnglePoint p = track(t);
  return rep.exp_i_jz(kPi - p.phi) * (rep.exp_i_jy(p.theta) * basis);
}

struct PhaseOptions {
  double tol = 1e-10;
  // Step of the five-point central difference for <phi_m| i d/dt |phi_m>;
  // 0 selects 1e-3/eps.
  double derivative_step = 0.0;
};

// Integrand of the LR total phase, <phi_m| i d/dt - H |phi_m>.
inline double lr_phase_integrand(const SpinRepresentation& rep, const AngleTrack& track,
                                 const DrivingField& field, double m, double t, double h) {
  const QuantumState here = lr_eigenstate(rep, track, m, t);
  auto at = [&](double s) { return here.dot(lr_eigenstate(rep, track, m, t + s)); };
  // Fourth order, so the step can stay large enough to keep roundoff ~1e-13.
  const Complex slope = (8.0 * (at(h) - at(-h)) - (at(2.0 * h) - at(-2.0 * h))) / (12.0 * h);
  const Complex geometric = Complex(0.0, 1.0) * slope;
  const Complex dynamic = here.dot(hamiltonian(rep, field, t) * here);
  return (geometric - dynamic).real();
}

// Phi_m(t, t0) by adaptive quadrature, absolute error <= opts.tol.
inline double lr_phase(const SpinRepresentation& rep, const AngleTrack& track,
                       const DrivingField& field, double m, double t0, double t,
                       const PhaseOptions& opts = {}) {
  if (t < t0) throw InvalidArgument("lr_phase requires t >= t0");
  rep.index_of(m);
  const double h =
      opts.derivative_step > 0.0 ? opts.derivative_step : 1e-3 / field.epsilon();
  return integrate([&](double s) { return lr_phase_integrand(rep, track, field, m, s, h); },
                   t0, t, opts.tol)
      .value;
}

struct LRSolution {
  double m = 0.0;
  double phase = 0.0;
  QuantumState state;
  double t0 = 0.0;
  double t = 0.0;
};

// e^{i Phi_m(t, t0)} |phi_m(t)>, an exact solution of the Schroedinger equation.
inline LRSolution lr_solution(const SpinRepresentation& rep, const AngleTrack& track,
                              const DrivingField& field, double m, double t0, double t,
                              const PhaseOptions& opts = {}) {
  LRSolution out;
  out.m = m;
  out.t0 = t0;
  out.t = t;
  out.phase = t == t0 ? 0.0 : lr_phase(rep, track, field, m, t0, t, opts);
  out.state = std::polar(1.0, out.phase) * lr_eigenstate(rep, track, m, t);
  return out;
}

struct PropagationResult {
  QuantumState state;
  double final_norm = 1.0;
  double max_norm_drift = 0.0;  // max | ||psi_n|| - 1 | over all steps
  int steps = 0;
  // max over steps of (j |Omega| dt)^5 / 120, the leading RK4 term for a
  // frozen generator; of order one or more flags an unresolved field.
  double max_local_error = 0.0;
};

struct PropagationOptions {
  bool renormalize = false;
  // Called after each step with (step index, time, state).
  std::function<void(int, double, const QuantumState&)> observer;
};

// Fixed-step RK4 for i d/dt psi = H(t) psi.
inline PropagationResult propagate_schrodinger(const SpinRepresentation& rep,
                                               const DrivingField& field,
                                               const QuantumState& psi0, double t0, double t1,
                                               int steps, const PropagationOptions& opts = {}) {
  if (steps < 1) throw InvalidArgument("steps must be >= 1");
  if (psi0.size() != rep.dim()) {
    throw DimensionMismatch(static_cast<std::size_t>(psi0.size()),
                            static_cast<std::size_t>(rep.dim()));
  }
  if (std::abs(psi0.norm() - 1.0) > 1e-9) throw InvalidArgument("initial state is not normalized");

  const double dt = (t1 - t0) / steps;
  const Complex minus_i(0.0, -1.0);
  // -i H(t) psi without forming H.
  QuantumState jx_psi(rep.dim()), jz_psi(rep.dim());
  double omega_peak = 0.0;
  auto rhs = [&](double t, const QuantumState& psi, QuantumState& out) {
    const FieldValue v = field(t);
    omega_peak = std::max(omega_peak, std::hypot(v.omega_x, v.omega_z));
    jx_psi.noalias() = rep.jx() * psi;
    jz_psi.noalias() = rep.jz() * psi;
    out = minus_i * (v.omega_x * jx_psi + v.omega_z * jz_psi);
  };

  PropagationResult out;
  out.steps = steps;
  out.state = psi0;
  QuantumState& psi = out.state;
  QuantumState k1(rep.dim()), k2(rep.dim()), k3(rep.dim()), k4(rep.dim()), tmp(rep.dim());
  for (int n = 0; n < steps; ++n) {
    const double t = t0 + n * dt;
    omega_peak = 0.0;
    rhs(t, psi, k1);
    tmp = psi + (0.5 * dt) * k1;
    rhs(t + 0.5 * dt, tmp, k2);
    tmp = psi + (0.5 * dt) * k2;
    rhs(t + 0.5 * dt, tmp, k3);
    tmp = psi + dt * k3;
    rhs(t + dt, tmp, k4);
    psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    const double z = rep.j() * omega_peak * std::abs(dt);
    out.max_local_error = std::max(out.max_local_error, z * z * z * z * z / 120.0);
    const double norm = psi.norm();
    out.max_norm_drift = std::max(out.max_norm_drift, std::abs(norm - 1.0));
    if (opts.renormalize && norm > 0.0) psi /= norm;
    if (opts.observer) opts.observer(n + 1, t + dt, psi);
  }
  out.final_norm = psi.norm();
  return out;
}

// Instantaneous eigenstate exp(-i theta_h J_y)|m> of H(t), eigenvalue m|Omega|.
inline QuantumState adiabatic_state(const SpinRepresentation& rep, const DrivingField& field,
                                    double m, double t) {
  const FieldValue v = field(t);
  if (v.omega_x == 0.0 && v.omega_z == 0.0) throw ZeroField(t);
  if (v.omega_x < 0.0) throw NegativeXField(t);
  const double theta_h = std::atan2(v.omega_x, v.omega_z);
  return rep.exp_i_jy(-theta_h) * rep.basis_state(m);
}

inline double fidelity(const QuantumState& a, const QuantumState& b) {
  if (a.size() != b.size()) {
    throw DimensionMismatch(static_cast<std::size_t>(a.size()),
                            static_cast<std::size_t>(b.size()));
  }
  return std::norm(a.dot(b));
}

}  // namespace lrspin

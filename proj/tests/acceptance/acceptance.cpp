// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "lrspin/lrspin.hpp"
#include "oracles.hpp"

using namespace lrspin;

namespace {

const ProtocolId kModels[] = {ProtocolId::model1(), ProtocolId::model2(), ProtocolId::model3()};

struct Verdict {
  bool pass = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
  void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

std::pair<double, double> closed_form(const ProtocolId& id, double eps, double t) {
  switch (id.kind) {
    case ProtocolId::Kind::model1: return oracle::model1_field(eps, t);
    case ProtocolId::Kind::model2: return oracle::model2_field(eps, t);
    default: return oracle::model3_field(eps, t);
  }
}

double aligned_distance(const QuantumState& a, const QuantumState& b) {
  return (b - std::polar(1.0, std::arg(a.dot(b))) * a).norm();
}

Verdict criterion1() {
  Verdict v;
  for (double eps : {1.0, 2.5}) {
    const DrivingField f = builtin_field(ProtocolId::model1(), eps);
    const AngleTrack tr = builtin_track(ProtocolId::model1(), eps);
    const auto events = find_crossings(f, tr, -6.0 / eps, 6.0 / eps, 1201, 1e-12 / eps);
    v.check(events.size() == 1, fmt("eps=%g: %g events", eps, double(events.size())));
    if (events.size() != 1) continue;
    const double tc = events[0].t_c;
    v.check(std::abs(tc) < 1e-10 / eps, fmt("eps=%g: t_c=%.3g", eps, tc));
    for (double m : {0.5, -0.5}) {
      const double e = nonadiabatic_level(f, tr, m, tc);
      v.check(std::abs(e) < 1e-12 * eps, fmt("eps=%g: E_%g(t_c)=%.3g", eps, m, e));
    }
    v.note(fmt("eps=%g t_c=%.3g", eps, tc));
  }
  return v;
}

Verdict criterion2() {
  Verdict v;
  const double expected = 0.25 * std::log(2.0 + std::sqrt(5.0));
  for (double eps : {1.0, 0.5}) {
    const DrivingField f = builtin_field(ProtocolId::model2(), eps);
    const AngleTrack tr = builtin_track(ProtocolId::model2(), eps);
    const auto events = find_crossings(f, tr, -2.0 / eps, 2.0 / eps, 1201, 1e-12 / eps);
    v.check(events.size() == 1, fmt("eps=%g: %g events", eps, double(events.size())));
    if (events.size() != 1) continue;
    const double xc = eps * events[0].t_c;
    v.check(std::abs(xc - expected) < 1e-9, fmt("eps=%g: eps*t_c=%.12f", eps, xc));
    const Vec3 alpha = invariant_vector(tr, events[0].t_c);
    const double comp = (alpha - oracle::model2_alpha_at_crossing()).cwiseAbs().maxCoeff();
    v.check(comp < 1e-9, fmt("eps=%g: alpha deviation %.3g", eps, comp));
    const double dot = alpha.dot(oracle::model2_field_at_crossing_over_eps());
    v.check(std::abs(dot) < 1e-9, fmt("eps=%g: alpha.Omega/eps=%.3g", eps, dot));
    v.note(fmt("eps*t_c=%.12f (1/4 ln(2+sqrt5)=%.12f)", xc, expected));
  }
  return v;
}

Verdict criterion3() {
  Verdict v;
  double worst_ratio = 0.0;
  for (double j : {0.5, 1.0, 1.5}) {
    const SpinRepresentation rep = make_spin_rep(j);
    for (const ProtocolId& id : kModels) {
      for (double eps : {1.0, 2.5}) {
        const DrivingField f = builtin_field(id, eps);
        const AngleTrack tr = builtin_track(id, eps);
        double worst = 0.0;
        for (int i = 0; i < 501; ++i) {
          const double t = (-10.0 + 20.0 * i / 500) / eps;
          worst = std::max(worst, invariant_residual(rep, f, tr, t, 1e-5 / eps));
        }
        worst_ratio = std::max(worst_ratio, worst / eps);
        v.check(worst < 1e-7 * eps, id.name() + fmt(" j=%g eps=%g: max residual %.3g", j, eps, worst));
      }
    }
    const double literal = invariant_residual(
        rep, builtin_field(ProtocolId::model3(), 1.0),
        builtin_track(ProtocolId::model3(), 1.0, TrackVariant::literal), 0.0, 1e-5);
    v.check(literal > 0.1, fmt("literal model3 j=%g residual %.3g", j, literal));
  }
  v.note(fmt("max residual/eps %.3g; literal model3 flagged", worst_ratio));
  return v;
}

Verdict criterion4() {
  Verdict v;
  for (const ProtocolId& id : kModels) {
    double worst = 0.0;
    for (double eps : {1.0, 2.5}) {
      const DrivingField engineered = engineer(builtin_track(id, eps), eps);
      for (int i = 0; i < 2001; ++i) {
        const double t = (-10.0 + 20.0 * i / 2000) / eps;
        const auto [ox, oz] = closed_form(id, eps, t);
        const FieldValue got = engineered(t);
        worst = std::max({worst, std::abs(got.omega_x - ox) / eps, std::abs(got.omega_z - oz) / eps});
      }
    }
    v.check(worst < 1e-9, id.name() + fmt(": max |diff|/eps %.3g", worst));
    if (worst < 1e-9) v.note(id.name() + fmt(" %.3g", worst));
  }
  return v;
}

Verdict criterion5() {
  Verdict v;
  for (const ProtocolId& id : kModels) {
    double worst = 0.0, worst_order = 99.0;
    bool finite = true;
    for (double j : {0.5, 1.0}) {
      const SpinRepresentation rep = make_spin_rep(j);
      const AngleTrack tr = builtin_track(id, 1.0);
      const DrivingField f = builtin_field(id, 1.0);
      for (Eigen::Index k = 0; k < rep.dim(); ++k) {
        const double m = rep.m_at(k);
        const QuantumState psi0 = lr_eigenstate(rep, tr, m, -20.0);
        const LRSolution exact = lr_solution(rep, tr, f, m, -20.0, 20.0);
        const PropagationResult r = propagate_schrodinger(rep, f, psi0, -20.0, 20.0, 100000);
        const double loss = 1.0 - fidelity(exact.state, r.state);
        if (!std::isfinite(loss)) finite = false;
        worst = std::isfinite(loss) ? std::max(worst, loss) : loss;
        if (m != rep.j()) continue;
        double previous = 0.0;
        for (int steps : {1250, 2500, 5000, 10000}) {
          const double d = aligned_distance(
              exact.state, propagate_schrodinger(rep, f, psi0, -20.0, 20.0, steps).state);
          if (previous > 0.0) {
            const double order = std::log2(previous / d);
            worst_order = std::isfinite(order) ? std::min(worst_order, order) : order;
          }
          previous = d;
        }
      }
    }
    const bool ok = finite && worst <= 1e-8 && worst_order >= 3.7;
    v.check(ok, finite ? id.name() + fmt(": 1-F=%.3g, min order %.3g", worst, worst_order)
                       : id.name() + ": RK4 state non-finite at 1e5 steps");
    if (ok) v.note(id.name() + fmt(" 1-F=%.2g order>=%.2f", worst, worst_order));
  }
  return v;
}

Verdict criterion6() {
  Verdict v;
  for (double j : {0.5, 1.0}) {
    const SpinRepresentation rep = make_spin_rep(j);
    for (double eps : {1.0, 2.0}) {
      const DrivingField f = builtin_field(ProtocolId::model1(), eps);
      for (Eigen::Index k = 0; k < rep.dim(); ++k) {
        const double m = rep.m_at(k);
        if (m == 0.0) continue;
        const PropagationResult r = propagate_schrodinger(rep, f, rep.basis_state(m), -20.0 / eps,
                                                          20.0 / eps, 100000);
        const double pop = std::norm(r.state(rep.index_of(-m)));
        v.check(pop >= 1.0 - 2e-3,
                fmt("j=%g m=%g", j, m) + fmt(" eps=%g: P(-m)=%.10f", eps, pop));
      }
    }
  }
  return v;
}

Verdict criterion7() {
  Verdict v;
  for (double eps : {1.0, 2.5}) {
    const DrivingField f = builtin_field(ProtocolId::model1(), eps);
    const AngleTrack tr = builtin_track(ProtocolId::model1(), eps);
    const double minus = overlap_f(f, tr, -1e3 / eps), plus = overlap_f(f, tr, 1e3 / eps);
    v.check(minus > 0.998, fmt("eps=%g: f(-T)=%.6f", eps, minus));
    v.check(plus < -0.998, fmt("eps=%g: f(+T)=%.6f", eps, plus));
    if (eps == 1.0) v.note(fmt("f(-T)=%.6f f(+T)=%.6f", minus, plus));
  }
  int count = 0;
  for (const ProtocolId& id : kModels) {
    for (double eps : {1.0, 2.5}) {
      const DrivingField f = builtin_field(id, eps);
      const AngleTrack tr = builtin_track(id, eps);
      for (const CrossingEvent& ev : find_crossings(f, tr, -6.0 / eps, 6.0 / eps, 1201, 1e-12 / eps)) {
        ++count;
        v.check(std::abs(ev.f_at_tc) < 1e-9, id.name() + fmt(": f(t_c)=%.3g", ev.f_at_tc));
      }
    }
  }
  v.check(count >= 6, fmt("only %g crossings found", count));
  v.note(fmt("%g crossings certified", count));
  return v;
}

Verdict criterion8() {
  Verdict v;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> x_dist(-20.0, 20.0);
  const SpinRepresentation rep = make_spin_rep(0.5);
  double worst = 0.0, worst_flipped = 0.0, worst_sym = 0.0;
  for (double eps : {1.0, 0.5}) {
    const AngleTrack tr = builtin_track(ProtocolId::model1(), eps);
    const DrivingField f = builtin_field(ProtocolId::model1(), eps);
    for (int trial = 0; trial < 20; ++trial) {
      double a = x_dist(rng) / eps, b = x_dist(rng) / eps;
      if (a > b) std::swap(a, b);
      for (double m : {0.5, -0.5}) {
        const double phase = lr_phase(rep, tr, f, m, a, b);
        worst = std::max(worst, std::abs(phase - oracle::model1_phase_printed(eps, m, a, b)));
        worst_flipped = std::max(worst_flipped, std::abs(phase - oracle::model1_phase(eps, m, a, b)));
      }
    }
    for (double T : {5.0, 20.0}) {
      worst_sym = std::max(worst_sym, std::abs(lr_phase(rep, tr, f, 0.5, -T / eps, T / eps)));
    }
  }
  v.check(worst < 1e-9, fmt("max |Phi - (-m(...))| = %.3g", worst));
  v.check(worst_sym < 1e-9, fmt("symmetric interval %.3g", worst_sym));
  v.note(fmt("symmetric %.3g; |Phi - (+m(...))| = %.3g", worst_sym, worst_flipped));
  return v;
}

Verdict criterion9() {
  Verdict v;
  for (double ratio : {0.2, 0.44, 1.0, 2.0}) {
    for (double nu : {1.0, 3.0}) {
      const LZParams p{std::sqrt(ratio * nu), nu};
      const double horizon = 250.0 * p.delta / p.nu;
      const double edge = 0.5 * std::hypot(p.delta, p.nu * horizon);
      const int steps = static_cast<int>(std::ceil(2.0 * horizon * edge / 0.05));
      const double err = std::abs(lz_numeric(p, horizon, steps) - lz_probability(p));
      v.check(err < 1e-2, fmt("D^2/nu=%g nu=%g: |diff|=%.3g", ratio, nu, err));
      if (nu == 1.0) v.note(fmt("%g: %.2g", ratio, err));
    }
  }
  return v;
}

std::string run_cli(const std::string& args, int& status) {
  static int counter = 0;
  char name[64];
  std::snprintf(name, sizeof name, "acceptance_cli_%d.out", ++counter);
  const std::string cmd = std::string(LRSPIN_CLI_PATH) + " " + args + " > " + name + " 2>/dev/null";
  const int raw = std::system(cmd.c_str());
  status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  std::ifstream in(name, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  std::remove(name);
  return ss.str();
}

Verdict criterion10() {
  Verdict v;
  const Complex I(0.0, 1.0);
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> t_dist(-10.0, 10.0);

  // Spin algebra.
  double algebra = 0.0;
  for (int tj = 1; tj <= 10; ++tj) {
    const SpinRepresentation rep(tj);
    const ComplexMatrix* ops[3] = {&rep.jx(), &rep.jy(), &rep.jz()};
    algebra = std::max(algebra, (commutator(rep.jx(), rep.jy()) - I * rep.jz()).norm());
    algebra = std::max(algebra, (commutator(rep.jy(), rep.jz()) - I * rep.jx()).norm());
    algebra = std::max(algebra, (commutator(rep.jz(), rep.jx()) - I * rep.jy()).norm());
    for (int a = 0; a < 3; ++a) {
      algebra = std::max(algebra, std::abs(ops[a]->trace()));
      algebra = std::max(algebra, (*ops[a] - ops[a]->adjoint()).norm());
      for (int b = 0; b < 3; ++b) {
        const double expected = a == b ? rep.trace_metric() : 0.0;
        algebra = std::max(algebra, std::abs((*ops[a] * *ops[b]).trace() - expected));
      }
    }
  }
  v.check(algebra < 1e-12, fmt("spin algebra defect %.3g", algebra));

  double linearity = 0.0, certificate = 0.0, expectation = 0.0;
  for (const ProtocolId& id : kModels) {
    const DrivingField f = builtin_field(id, 1.0);
    const AngleTrack tr = builtin_track(id, 1.0);
    for (int trial = 0; trial < 25; ++trial) {
      const double t = t_dist(rng);
      const double scale = std::max(1.0, f.vector(t).norm());
      for (double m : {-1.5, -0.5, 0.5, 1.0, 2.5}) {
        for (double mp : {-1.0, 0.5, 2.0}) {
          linearity = std::max(linearity, std::abs(nonadiabatic_level(f, tr, m, t) * mp -
                                                   nonadiabatic_level(f, tr, mp, t) * m) /
                                              scale);
        }
      }
      for (double j : {0.5, 1.0, 1.5}) {
        const SpinRepresentation rep = make_spin_rep(j);
        const double dot = f.vector(t).dot(invariant_vector(tr, t));
        certificate = std::max(
            certificate, std::abs(frobenius_certificate(rep, f, tr, t) - dot * rep.trace_metric()) / scale);
        const Vec3 alpha = invariant_vector(tr, t);
        for (Eigen::Index k = 0; k < rep.dim(); ++k) {
          const double m = rep.m_at(k);
          const QuantumState phi = lr_eigenstate(rep, tr, m, t);
          const Vec3 e(phi.dot(rep.jx() * phi).real(), phi.dot(rep.jy() * phi).real(),
                       phi.dot(rep.jz() * phi).real());
          expectation = std::max(expectation, (e - m * alpha).norm());
        }
      }
    }
  }
  v.check(linearity < 1e-12, fmt("level-ratio defect %.3g", linearity));
  v.check(certificate < 1e-12, fmt("Frobenius certificate defect %.3g", certificate));
  v.check(expectation < 1e-10, fmt("expectation identity defect %.3g", expectation));

  int identical = 0, total = 0;
  for (const char* args : {"levels --model model2 --j 1", "crossings --model model3",
                           "propagate --model model1 --steps 2000 --stride 10",
                           "verify --model model3 --literal-track", "lz --delta 0.7 --nu 1"}) {
    int s1 = 0, s2 = 0;
    const std::string a = run_cli(args, s1), b = run_cli(args, s2);
    ++total;
    if (s1 == 0 && s2 == 0 && !a.empty() && a == b) ++identical;
  }
  v.check(identical == total, fmt("CLI determinism %g/%g", identical, total));
  v.note(fmt("algebra %.2g, linearity %.2g, certificate %.2g", algebra, linearity, certificate));
  v.note(fmt("expectation %.2g, CLI %g/%g byte-identical", expectation, identical, total));
  return v;
}

}  // namespace

int main() {
  using Check = Verdict (*)();
  const Check checks[] = {criterion1, criterion2, criterion3, criterion4, criterion5,
                          criterion6, criterion7, criterion8, criterion9, criterion10};
  int failures = 0;
  for (int i = 0; i < 10; ++i) {
    Verdict v;
    try {
      v = checks[i]();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    if (!v.pass) ++failures;
    std::printf("criterion %d: %s  %s\n", i + 1, v.pass ? "PASS" : "FAIL", v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/10 criteria passed\n", 10 - failures);
  return failures == 0 ? 0 : 1;
}

#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lrspin/errors.hpp"
#include "lrspin/spin_algebra.hpp"
#include "lrspin/spline.hpp"

namespace lrspin {

// Field components (Omega_x, Omega_z) at one instant; Omega_y is always zero.
struct FieldValue {
  double omega_x;
  double omega_z;
};

// Time-parameterized field in the x-z plane with its scale epsilon.
class DrivingField {
 public:
  using Evaluator = std::function<FieldValue(double)>;

  DrivingField(Evaluator eval, double epsilon, std::string label)
      : eval_(std::move(eval)), epsilon_(epsilon), label_(std::move(label)) {}

  FieldValue operator()(double t) const { return eval_(t); }
  double omega_x(double t) const { return eval_(t).omega_x; }
  double omega_z(double t) const { return eval_(t).omega_z; }

  // (Omega_x, 0, Omega_z).
  Vec3 vector(double t) const {
    const FieldValue v = eval_(t);
    return {v.omega_x, 0.0, v.omega_z};
  }

  double epsilon() const noexcept { return epsilon_; }
  const std::string& label() const noexcept { return label_; }

 private:
  Evaluator eval_;
  double epsilon_;
  std::string label_;
};

// Invariant angles and their rates at one instant. The trigonometric values
// are carried alongside the angles because tracks approaching 0 or pi lose
// all relative precision in sin/cos once the angle is rounded to a double.
struct AnglePoint {
  double theta;
  double phi;
  double dtheta;
  double dphi;
  double sin_theta;
  double cos_theta;
  double sin_phi;
  double cos_phi;

  static AnglePoint from_angles(double theta, double phi, double dtheta, double dphi) {
    return {theta, phi, dtheta, dphi, std::sin(theta), std::cos(theta),
            std::sin(phi), std::cos(phi)};
  }
};

enum class TrackSource { analytic, tabulated };

class AngleTrack {
 public:
  using Evaluator = std::function<AnglePoint(double)>;

  AngleTrack(Evaluator eval, TrackSource source, std::string label)
      : eval_(std::move(eval)), source_(source), label_(std::move(label)) {}

  AnglePoint operator()(double t) const { return eval_(t); }
  double theta(double t) const { return eval_(t).theta; }
  double phi(double t) const { return eval_(t).phi; }

  TrackSource source() const noexcept { return source_; }
  const std::string& label() const noexcept { return label_; }

 private:
  Evaluator eval_;
  TrackSource source_;
  std::string label_;
};

struct ProtocolId {
  enum class Kind { model1, model2, model3, lz };

  Kind kind = Kind::model1;
  double delta = 0.0;  // lz coupling
  double nu = 0.0;     // lz sweep rate

  static ProtocolId model1() { return {Kind::model1}; }
  static ProtocolId model2() { return {Kind::model2}; }
  static ProtocolId model3() { return {Kind::model3}; }
  static ProtocolId lz(double delta, double nu) { return {Kind::lz, delta, nu}; }

  std::string name() const {
    switch (kind) {
      case Kind::model1: return "model1";
      case Kind::model2: return "model2";
      case Kind::model3: return "model3";
      case Kind::lz: return "lz";
    }
    return "unknown";
  }
};

inline ProtocolId parse_protocol(std::string_view name, double delta = 0.0, double nu = 0.0) {
  if (name == "model1") return ProtocolId::model1();
  if (name == "model2") return ProtocolId::model2();
  if (name == "model3") return ProtocolId::model3();
  if (name == "lz") return ProtocolId::lz(delta, nu);
  throw InvalidArgument("unknown protocol '" + std::string(name) + "'");
}

// Model 3 ships a sign-corrected phi(t); the literal variant keeps the
// opposite sign and does not generate the closed-form model-3 field.
enum class TrackVariant { corrected, literal };

namespace detail {

inline void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw InvalidArgument(std::string(what) + " must be positive and finite");
  }
}

inline double sech(double x) { return 1.0 / std::cosh(x); }

}  // namespace detail

inline DrivingField builtin_field(const ProtocolId& id, double epsilon) {
  detail::require_positive(epsilon, "epsilon");
  const double eps = epsilon;
  switch (id.kind) {
    case ProtocolId::Kind::model1:
      return DrivingField(
          [eps](double t) {
            const double x = eps * t;
            const double x2 = x * x;
            return FieldValue{eps / std::sqrt(x2 + 1.0), eps * (x2 - 1.0) / (x2 + 1.0)};
          },
          eps, "model1");
    case ProtocolId::Kind::model2:
      return DrivingField(
          [eps](double t) {
            const double x = eps * t;
            double oz;
            if (x <= 0.0) {
              const double u = std::exp(2.0 * x);
              oz = eps * (5.0 * u - u * u * u) / (1.0 + u * u);
            } else {
              // Same ratio with numerator and denominator scaled by e^{-6 eps t}.
              const double w = std::exp(-2.0 * x);
              oz = eps * (5.0 * w * w - 1.0) / (w * (w * w + 1.0));
            }
            return FieldValue{eps, oz};
          },
          eps, "model2");
    case ProtocolId::Kind::model3:
      return DrivingField(
          [eps](double t) {
            const double x = eps * t;
            const double s2 = detail::sech(2.0 * x);
            return FieldValue{2.0 * eps * detail::sech(x) * std::sqrt(s2),
                              eps * (3.0 * s2 - 2.0)};
          },
          eps, "model3");
    case ProtocolId::Kind::lz: {
      detail::require_positive(id.delta, "lz delta");
      detail::require_positive(id.nu, "lz nu");
      const double delta = id.delta, nu = id.nu;
      return DrivingField([delta, nu](double t) { return FieldValue{delta, nu * t}; }, eps,
                          "lz");
    }
  }
  throw InvalidArgument("unknown protocol id");
}

inline AngleTrack builtin_track(const ProtocolId& id, double epsilon,
                                TrackVariant variant = TrackVariant::corrected) {
  detail::require_positive(epsilon, "epsilon");
  const double eps = epsilon;
  switch (id.kind) {
    case ProtocolId::Kind::model1:
      return AngleTrack(
          [eps](double t) {
            const double x = eps * t;
            const double r = std::hypot(1.0, x);
            const double a = std::atan(x);
            const double rate = eps / (1.0 + x * x);
            return AnglePoint{0.5 * kPi + a, 1.5 * kPi - a, rate, -rate,
                              1.0 / r,       -x / r,       -1.0 / r, -x / r};
          },
          TrackSource::analytic, "model1");
    case ProtocolId::Kind::model2:
      return AngleTrack(
          [eps](double t) {
            const double x = eps * t;
            AnglePoint p{};
            if (x <= 0.0) {
              const double u = std::exp(2.0 * x);
              const double r = std::hypot(1.0, u);
              p.theta = std::atan2(1.0, u);
              p.phi = 2.0 * std::atan(u);
              p.sin_theta = 1.0 / r;
              p.cos_theta = u / r;
              p.sin_phi = 2.0 * u / (1.0 + u * u);
              p.cos_phi = (1.0 - u * u) / (1.0 + u * u);
            } else {
              const double w = std::exp(-2.0 * x);
              const double r = std::hypot(1.0, w);
              p.theta = std::atan(w);
              p.phi = kPi - 2.0 * std::atan(w);
              p.sin_theta = w / r;
              p.cos_theta = 1.0 / r;
              p.sin_phi = 2.0 * w / (1.0 + w * w);
              p.cos_phi = (w * w - 1.0) / (1.0 + w * w);
            }
            p.dtheta = -eps * p.sin_phi;
            p.dphi = 2.0 * eps * p.sin_phi;
            return p;
          },
          TrackSource::analytic, "model2");
    case ProtocolId::Kind::model3: {
      const double sign = variant == TrackVariant::corrected ? 1.0 : -1.0;
      return AngleTrack(
          [eps, sign](double t) {
            const double x = eps * t;
            const double s2 = detail::sech(2.0 * x);
            const double th = std::tanh(x);
            const double q = 1.0 / std::sqrt(1.0 + th * th);
            AnglePoint p{};
            // arccos(tanh 2x) written as 2 atan(e^{-2x}) to keep precision near 0.
            p.theta = 2.0 * std::atan(std::exp(-2.0 * x));
            p.phi = 0.5 * kPi + sign * std::atan(th);
            p.dtheta = -2.0 * eps * s2;
            p.dphi = sign * eps * s2;
            p.sin_theta = s2;
            p.cos_theta = std::tanh(2.0 * x);
            p.sin_phi = q;
            p.cos_phi = -sign * th * q;
            return p;
          },
          TrackSource::analytic,
          variant == TrackVariant::corrected ? "model3" : "model3-literal");
    }
    case ProtocolId::Kind::lz:
      throw NoExactTrack();
  }
  throw InvalidArgument("unknown protocol id");
}

// Reverse engineering: the unique x-z field whose invariant follows the track.
//   Omega_x = -dtheta / sin(phi)
//   Omega_z = dphi + Omega_x cot(theta) cos(phi)
inline DrivingField engineer(AngleTrack track, double epsilon = 1.0) {
  auto eval = [track](double t) {
    const AnglePoint p = track(t);
    double ox;
    if (std::abs(p.sin_phi) > 1e-12) {
      ox = -p.dtheta / p.sin_phi;
    } else {
      // 0/0 only; resolve by l'Hopital with one more derivative of theta.
      if (std::abs(p.dtheta) > 1e-9) throw SingularTrack(t);
      const double h = 1e-6 * std::max(1.0, std::abs(t));
      const double ddtheta = (track(t + h).dtheta - track(t - h).dtheta) / (2.0 * h);
      const double denom = p.dphi * p.cos_phi;
      if (std::abs(denom) < 1e-12) throw SingularTrack(t);
      ox = -ddtheta / denom;
      if (!std::isfinite(ox)) throw SingularTrack(t);
    }
    const double coupling = ox * p.cos_phi;
    double oz = p.dphi;
    if (coupling != 0.0) {
      if (p.sin_theta == 0.0) {
        throw DomainError("sin(theta)=0 with divergent cot(theta) term", t);
      }
      oz += coupling * p.cos_theta / p.sin_theta;
    }
    return FieldValue{ox, oz};
  };
  return DrivingField(std::move(eval), epsilon, "engineered:" + track.label());
}

// alpha_h = Omega / |Omega|.
inline Vec3 field_orientation(const DrivingField& field, double t) {
  const FieldValue v = field(t);
  const double norm = std::hypot(v.omega_x, v.omega_z);
  if (norm == 0.0) throw ZeroField(t);
  return {v.omega_x / norm, 0.0, v.omega_z / norm};
}

// Rows of (t, theta, phi) for a tabulated track.
struct TrackSamples {
  std::vector<double> t;
  std::vector<double> theta;
  std::vector<double> phi;

  std::size_t size() const noexcept { return t.size(); }

  void push_back(double time, double th, double ph) {
    t.push_back(time);
    theta.push_back(th);
    phi.push_back(ph);
  }

  // Line numbers in errors count a header line, matching the file layout.
  void validate() const {
    if (theta.size() != t.size() || phi.size() != t.size()) {
      throw MalformedSamples("column lengths differ", 0);
    }
    if (t.size() < 5) {
      throw MalformedSamples("need at least 5 rows, got " + std::to_string(t.size()), 0);
    }
    for (std::size_t i = 0; i < t.size(); ++i) {
      const std::size_t line = i + 2;
      if (!std::isfinite(t[i]) || !std::isfinite(theta[i]) || !std::isfinite(phi[i])) {
        throw MalformedSamples("non-finite value", line);
      }
      if (theta[i] < -1e-12 || theta[i] > kPi + 1e-12) {
        throw MalformedSamples("theta outside [0, pi]", line);
      }
      if (i > 0 && !(t[i] > t[i - 1])) throw NonMonotonicSamples(line);
    }
  }
};

// Natural cubic interpolation of theta and phi; derivatives come from the
// interpolant. Queries outside [t_first, t_last] throw OutOfRange.
inline AngleTrack tabulated_track(const TrackSamples& samples) {
  samples.validate();
  auto theta = std::make_shared<const NaturalCubicSpline>(samples.t, samples.theta);
  auto phi = std::make_shared<const NaturalCubicSpline>(samples.t, samples.phi);
  return AngleTrack(
      [theta, phi](double t) {
        const auto [th, dth] = theta->evaluate(t);
        const auto [ph, dph] = phi->evaluate(t);
        return AnglePoint::from_angles(th, ph, dth, dph);
      },
      TrackSource::tabulated, "tabulated");
}

// |cot(theta_h) - cos(phi) cot(theta)| at -T and +T, with cot(theta_h) taken as
// Omega_z / Omega_x (theta_h lives in the Omega_x >= 0 half-plane).
inline std::pair<double, double> asymptotic_relation_residual(const AngleTrack& track,
                                                              const DrivingField& field,
                                                              double horizon) {
  detail::require_positive(horizon, "horizon T");
  auto residual = [&](double t) {
    const FieldValue v = field(t);
    if (v.omega_x == 0.0 && v.omega_z == 0.0) throw ZeroField(t);
    if (v.omega_x < 0.0) throw NegativeXField(t);
    const AnglePoint p = track(t);
    const double cot_h = v.omega_z / v.omega_x;
    const double cot_inv = p.cos_phi * p.cos_theta / p.sin_theta;
    return std::abs(cot_h - cot_inv);
  };
  return {residual(-horizon), residual(horizon)};
}

}  // namespace lrspin

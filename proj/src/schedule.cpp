#include "geminal/schedule.hpp"

#include <algorithm>
#include <cmath>

#include "geminal/errors.hpp"

namespace geminal {

RampProfile parse_profile(const std::string& name) {
  if (name == "linear") return RampProfile::linear;
  if (name == "quadratic") return RampProfile::quadratic;
  if (name == "smooth" || name == "smoothstep" || name == "cubic")
    return RampProfile::smooth;
  throw InputError("unknown ramp profile '" + name + "'");
}

std::string profile_name(RampProfile profile) {
  switch (profile) {
    case RampProfile::linear: return "linear";
    case RampProfile::quadratic: return "quadratic";
    case RampProfile::smooth: return "smooth";
  }
  return "smooth";
}

double ramp_value(RampProfile profile, double u) {
  u = std::clamp(u, 0.0, 1.0);
  switch (profile) {
    case RampProfile::linear: return u;
    case RampProfile::quadratic: return u * u;
    case RampProfile::smooth: return u * u * (3.0 - 2.0 * u);
  }
  return u;
}

namespace {

double window(RampProfile profile, double t, double begin, double end) {
  if (t <= begin) return 0.0;
  if (t >= end) return 1.0;
  return ramp_value(profile, (t - begin) / (end - begin));
}

}  // namespace

double Schedule::eps(double t) const {
  if (epsilon_fn) return epsilon_fn(t);
  if (type == "driven") return epsilon + drive_amplitude * std::sin(drive_frequency * t);
  if (staged())
    return epsilon * (window(profile, t, 0.0, T1) - window(profile, t, T2, T3));
  return epsilon;
}

double Schedule::lambda(double t) const {
  if (lambda_fn) return lambda_fn(t);
  if (type == "constant" || type == "driven") return lambda_value;
  if (type == "coupled") return 1.0;
  if (type == "sudden") return t >= T ? 1.0 : 0.0;
  if (staged()) return window(profile, t, T1, T2);
  return window(profile, t, 0.0, T);
}

bool Schedule::time_independent() const {
  if (epsilon_fn || lambda_fn) return false;
  if (type == "constant" || type == "coupled") return true;
  if (type == "driven") return drive_amplitude == 0.0;
  return false;
}

long Schedule::steps() const { return std::lround(t_final / dt); }

void Schedule::validate() const {
  static const char* known[] = {"constant", "sudden", "ramp", "coupled", "driven"};
  if (std::find(std::begin(known), std::end(known), type) == std::end(known))
    throw InputError("unknown schedule type '" + type + "'");
  if (!(dt > 0.0)) throw InputError("dt must be positive");
  if (!(t_final > 0.0)) throw InputError("t_final must be positive");
  if (type == "ramp" && !staged() && !lambda_fn && !(T > 0.0))
    throw InputError("ramp duration T must be positive");
  if (staged() && !(T1 >= 0.0 && T2 > T1 && T3 > T2))
    throw InputError("staged ramp needs 0 <= T1 < T2 < T3");
}

Schedule Schedule::constant(double epsilon, double lambda, double dt, double t_final) {
  Schedule s;
  s.type = "constant";
  s.epsilon = epsilon;
  s.lambda_value = lambda;
  s.dt = dt;
  s.t_final = t_final;
  return s;
}

Schedule Schedule::sudden(double epsilon, double T, double dt, double t_final) {
  Schedule s;
  s.type = "sudden";
  s.epsilon = epsilon;
  s.T = T;
  s.dt = dt;
  s.t_final = t_final;
  return s;
}

Schedule Schedule::ramp(double epsilon, double T, RampProfile profile, double dt,
                        double t_final) {
  Schedule s;
  s.type = "ramp";
  s.epsilon = epsilon;
  s.T = T;
  s.profile = profile;
  s.dt = dt;
  s.t_final = t_final;
  return s;
}

Schedule Schedule::driven(double epsilon, double lambda, double amplitude,
                          double frequency, double dt, double t_final) {
  Schedule s;
  s.type = "driven";
  s.epsilon = epsilon;
  s.lambda_value = lambda;
  s.drive_amplitude = amplitude;
  s.drive_frequency = frequency;
  s.dt = dt;
  s.t_final = t_final;
  return s;
}

}  // namespace geminal

#pragma once

// Triangle inequalities on Cosine similarities of unit vectors.
//
// For unit vectors x, y, z with a = <x,z> and b = <z,y>, the angles satisfy
// the triangle inequality, which without any trigonometric call becomes
//
//   a*b - sqrt((1-a^2)(1-b^2))  <=  <x,y>  <=  a*b + sqrt((1-a^2)(1-b^2)).
//
// All functions clamp their output to [-1, 1] and compute sqrt(max(0, .)) so
// rounding never produces a domain error or an out-of-range Cosine.

#include <algorithm>
#include <cmath>

namespace spkm::geometry {

inline double clamp_cos(double v) { return std::clamp(v, -1.0, 1.0); }

// sqrt((1-a^2)(1-b^2)), i.e. sin(arccos a) * sin(arccos b).
inline double sine_product(double a, double b) {
  return std::sqrt(std::max(0.0, 1.0 - a * a)) * std::sqrt(std::max(0.0, 1.0 - b * b));
}

inline double cos_lower_bound(double a, double b) {
  return clamp_cos(a * b - sine_product(a, b));
}

inline double cos_upper_bound(double a, double b) {
  return clamp_cos(a * b + sine_product(a, b));
}

// The update rules below receive a *bound*, not an exact similarity, and the
// plain formulas are only valid where the angle sum or difference stays in
// [0, pi]. Outside that range they fall back to the trivial bound, so the
// results agree with cos_lower_bound / cos_upper_bound wherever those are
// valid and stay sound everywhere else.

// New lower bound on <x, c(a)> after c(a) moved with drift p = <c, c'>.
// arccos(l) + arccos(p) > pi exactly when l + p < 0.
inline double update_lower_bound(double l, double p) {
  if (l + p < 0.0) return -1.0;
  return cos_lower_bound(l, p);
}

// New upper bound on <x, c(j)> after c(j) moved with drift p. If the center
// moved by at least the bounded angle (p <= u) it may now coincide with x.
inline double update_upper_bound(double u, double p) {
  if (p <= u) return 1.0;
  return cos_upper_bound(u, p);
}

// Single upper bound over all non-assigned centers, given the smallest drift
// p_min among them: u + sqrt((1-u^2)(1-p_min^2)). For u, p_min >= 0 this
// dominates update_upper_bound(u, p(j)) for every p(j) >= p_min; the max with
// update_upper_bound(u, p_min) keeps it sound for negative inputs. Note that
// cos_upper_bound(u, p_min) is NOT such a bound.
inline double hamerly_upper_update(double u, double p_min) {
  return std::max(clamp_cos(u + sine_product(u, p_min)), update_upper_bound(u, p_min));
}

// Cosine of half the angle whose Cosine is s.
inline double half_angle_cc(double s) { return std::sqrt(std::max(0.0, (s + 1.0) * 0.5)); }

}  // namespace spkm::geometry

// Hyperbolic plane in upper half-plane coordinates. All moves are computed in
// the Cayley disk frame at the starting point (affine normalization p -> i
// followed by w -> (w - i) / (w + i)), with the cancellation-prone term
// 1 - z evaluated in closed form so that points up to hyperbolic
// distance ~700 from the frame center stay accurate.

#include <cmath>

#include "detail.hpp"

namespace geolab::detail::half_plane {

namespace {

constexpr Complex kI{0.0, 1.0};

// 1 - dir for a unit complex, without cancellation.
Complex one_minus(Complex dir) {
  const double c = dir.real();
  const double s = dir.imag();
  const double re = c > 0.0 ? s * s / (1.0 + c) : 1.0 - c;
  return {re, -s};
}

}  // namespace

double distance(const HalfPlaneCoords& p, const HalfPlaneCoords& q) {
  const double chord = std::hypot(p.x - q.x, p.y - q.y);
  if (chord == 0.0) return 0.0;
  return 2.0 * std::asinh(chord / (2.0 * std::sqrt(p.y) * std::sqrt(q.y)));
}

Complex direction(const HalfPlaneCoords& p, const HalfPlaneCoords& q) {
  // (w - i) conj(w + i) with w - i = a + ib.
  const double a = (q.x - p.x) / p.y;
  const double b = (q.y - p.y) / p.y;
  const Complex zeta{a * a + b * (b + 2.0), -2.0 * a};
  const double r = std::abs(zeta);
  if (r == 0.0) fail(ErrorCode::degenerate_input, "direction toward the same point");
  return zeta / r;
}

HalfPlaneCoords shoot(const HalfPlaneCoords& p, Complex dir, double s) {
  if (s == 0.0) return p;
  const double th = std::tanh(0.5 * s);
  const double em = std::exp(-s);
  const double rest = 2.0 * em / (1.0 + em);           // 1 - tanh(s/2)
  const double sech2 = 4.0 * em / ((1.0 + em) * (1.0 + em));  // 1 - tanh^2(s/2)
  const Complex om = one_minus(dir);
  const Complex one_minus_z{rest + th * om.real(), th * om.imag()};
  const double denom = std::norm(one_minus_z);
  // w = i (1 + z) / (1 - z) = -b + i a, a = (1-|z|^2)/|1-z|^2, b = 2 Im z/|1-z|^2
  const double a = sech2 / denom;
  const double b = 2.0 * th * dir.imag() / denom;
  return {p.x - p.y * b, p.y * a};
}

HalfPlaneCoords toward(const HalfPlaneCoords& p, const HalfPlaneCoords& q, double s) {
  const double d = distance(p, q);
  if (s <= 0.0 || d == 0.0) return p;
  if (s >= d) return q;
  if (s <= 0.5 * d) return shoot(p, direction(p, q), s);
  return shoot(q, direction(q, p), d - s);
}

HalfPlaneCoords from_disk(double u, double v) {
  const Complex z{u, v};
  const Complex om{1.0 - u, -v};
  const double denom = std::norm(om);
  const double a = (1.0 - std::norm(z)) / denom;
  const double b = 2.0 * v / denom;
  return {-b, a};
}

std::pair<double, double> to_disk(const HalfPlaneCoords& p) {
  const Complex w{p.x, p.y};
  const Complex z = (w - kI) / (w + kI);
  return {z.real(), z.imag()};
}

}  // namespace geolab::detail::half_plane


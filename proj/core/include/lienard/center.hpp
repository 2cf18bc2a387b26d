#pragma once

#include <vector>

#include "lienard/flow.hpp"
#include "lienard/poly.hpp"

namespace lienard {

/// F(x) = K(x^2). `k` is the same polynomial, named for its role in the
/// transformed system.
struct CenterDecomposition {
  UniPoly K;
  UniPoly k;
};

/// Throws NotEven when F has a nonzero odd coefficient.
CenterDecomposition decompose_even(const UniPoly& F);

struct ParabolaCrossings {
  Point first;
  Point second;
  /// x^2 at each crossing.
  double first_value = 0.0;
  double second_value = 0.0;
};

/// First two forward crossings of y + x^2 = 0 (a point on the curve counts
/// as a zero-time first crossing).
ParabolaCrossings parabola_crossings(const LienardField& field, Point p, const FlowSettings& settings);

/// x_c^2 at the first forward crossing of y = -x^2.
double first_integral_parabola(const LienardField& field, Point p, const FlowSettings& settings);

/// Section coordinate where the orbit of (u, v) = (x^2, y) under
/// u' = 2(v - K(u)), v' = -1 meets v = u. The system is the image of the
/// field on x > 0 after dividing time by x; points with x < 0 use the mirror
/// (-x, y), which lies on the same orbit family for even F.
double first_integral_transformed(const CenterDecomposition& decomp, Point p, const FlowSettings& settings);

struct CenterOrbit {
  double s = 0.0;
  double displacement = 0.0;
  double period = 0.0;
  double parabola = 0.0;
  double transformed = 0.0;
  /// (max - min) / |mean| over the samples along the orbit.
  double parabola_spread = 0.0;
  double transformed_spread = 0.0;
  /// |x^2| difference between the first and second parabola crossings.
  double crossing_gap = 0.0;
};

struct CenterReport {
  std::vector<CenterOrbit> orbits;
  double tolerance = 1e-8;
  double max_displacement = 0.0;
  double max_parabola_spread = 0.0;
  double max_transformed_spread = 0.0;
  bool parabola_monotone = false;
  bool transformed_monotone = false;
};

struct CenterOptions {
  int orbit_count = 10;
  double s_min = 0.2;
  double s_max = 2.0;
  int samples_per_orbit = 32;
  double tolerance = 1e-8;
  unsigned threads = 0;
};

/// Checks closedness of orbits through (0, s) for evenly spaced s and the
/// constancy of both first integrals along each. Throws CenterViolation with
/// the worst displacement when an orbit fails to close, NotEven afterwards
/// if F is not even.
CenterReport verify_center(const LienardField& field, const CenterOptions& options, const FlowSettings& settings);

}  // namespace lienard

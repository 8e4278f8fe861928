// Corner/angle/amplitude conversions, canonical planar polygonal lines, and
// the growth vectors V and V_m built from one-sided tangent directions.
#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "filament/vec3.hpp"

namespace filament::geometry {

// Angle law sin(theta/2) = exp(-(pi/2) |alpha|^2), both directions.
// alpha_from_angle requires theta in (0, pi]; angle_from_alpha requires
// alpha >= 0 and returns a value in (0, pi].
double alpha_from_angle(double theta);
double angle_from_alpha(double alpha);

struct Corner {
    int position = 0;       // integer x-coordinate
    cplx alpha{0.0, 0.0};   // complex amplitude
};

// Dirac-comb datum: strictly increasing integer positions with amplitudes.
struct CornerData {
    std::vector<Corner> entries;
    double mass = 0.0;           // sum |alpha_j|^2
    double weighted_norm = 0.0;  // l^{2,s} norm with <j> = sqrt(1+j^2) weights
    double weight_s = 0.75;      // configured s > 1/2 (metadata only)

    CornerData() = default;
    explicit CornerData(std::vector<Corner> corners, double s = 0.75);

    bool empty() const { return entries.empty(); }
    int max_abs_position() const;
    // Two corners at +-1 with equal real amplitude alpha(theta).
    static CornerData two_corner(double theta);
    // 2N corners at the odd integers {-2N+1, ..., 2N-1}, equal angle theta.
    static CornerData equal_angle(int n_corners, double theta);
};

// Planar polygonal line through the corner set. Segment k spans
// (pos_{k-1}, pos_k); the two outermost directions are T^{-inf} and T^{+inf}.
struct PolyLine {
    CornerData corners;
    double theta = 0.0;                    // common interior angle (planar case)
    std::vector<UnitVec3> segment_directions;  // one per segment (count = corners+1)
    std::vector<Vec3> vertices;            // corner positions in R^3
    bool planar = true;
    std::string warning;                   // set for non-planar data embedded planar

    int segment_count() const { return static_cast<int>(segment_directions.size()); }
    // Direction of the segment containing x (corners break ties to the right).
    UnitVec3 direction_at(double x) const;
    // One-sided tangents at a corner position.
    UnitVec3 tangent_left(int corner_pos) const;
    UnitVec3 tangent_right(int corner_pos) const;
    // Tangent of the limit curve at arclength x (direction_at), and its point.
    Vec3 point_at(double x) const;

    std::string to_json() const;
};

// Canonical embedding: the segment containing x = 0 points along +x, every
// corner turns by the exterior angle (pi - theta_j) with the same rotation
// sense in the xy-plane, and chi(0) = 0.  Same-sign turns reproduce
// |T^{-inf} - 2 T^0 + T^{+inf}| = 2 (1 - cos(pi - theta)) for the two-corner
// line, which pins the embedding.
PolyLine build_polyline(const CornerData& corners, bool planar_required = true);

struct GrowthVector {
    CVec3 value;        // i * (-2/pi) log(sin(theta/2)) * (sum of tangents)
    Vec3 direction_sum; // the real tangent combination before the i-scaling
    double magnitude = 0.0;
    bool degenerate = false;  // theta = pi (no corner): V = 0
};

// V for the two-corner line: i (-2/pi) log(sin theta/2) (T^-inf - 2 T^0 + T^+inf).
GrowthVector growth_vector_V(const PolyLine& poly);

// V_m for the 2N-corner line (m in 1..N), telescoped four-tangent form:
// i (-2/pi) log(sin theta/2) *
//   (T((-2N+1)^-) - T((-2N+1+2m)^-) - T((2N-1-2m)^+) + T((2N-1)^+)).
GrowthVector growth_vector_Vm(const PolyLine& poly, int m);

// Polar reading of u: curvature = |u|, torsion = caller-supplied phase
// derivative. Torsion is NaN when the curvature vanishes.
struct CurvatureTorsion {
    double curvature = 0.0;
    double torsion = 0.0;
};
CurvatureTorsion curvature_torsion_from_u(cplx u, double theta_x);

}  // namespace filament::geometry

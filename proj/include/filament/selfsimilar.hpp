// One-corner self-similar family via the Frenet profile system with constant
// curvature alpha and torsion y/2:
//   T' = c n,  n' = -c T + (y/2) b,  b' = -(y/2) n,  G' = T,  G(0) = 0,
// frame(0) = canonical basis. Gives an independent oracle for the corner
// angle law and for frame-field cross checks.
#pragma once

#include <vector>

#include "filament/vec3.hpp"

namespace filament::selfsimilar {

struct FrenetFrame {
    Vec3 T, n, b;
};

struct ProfileTrajectory {
    double alpha = 0.0;
    double y_max = 0.0;
    double dy = 0.0;  // stored grid spacing; samples at y = -y_max .. y_max
    std::vector<Vec3> points;        // G(y)
    std::vector<FrenetFrame> frames; // (T, n, b)(y)
    double max_frame_defect = 0.0;   // worst pre-projection orthonormality drift

    size_t index_of_zero() const { return (points.size() - 1) / 2; }
    double y_at(size_t i) const { return -y_max + double(i) * dy; }
    size_t size() const { return points.size(); }

    Vec3 point(double y) const;    // linear interpolation
    Vec3 tangent(double y) const;  // interpolated and renormalized
};

struct ProfileOptions {
    double eps_rot = 0.02;     // max Frenet rotation per internal substep
    int max_substeps = 1 << 22;  // per stored cell; exceeding this is an error
};

// Integrates both directions out to +-y_max. y_max >= 50 (asymptotics), and
// dy must be positive.
ProfileTrajectory integrate_profile(double alpha, double y_max, double dy,
                                    const ProfileOptions& opts = {});

struct AsymptoticTangents {
    UnitVec3 t_minus;  // limit of T(y) as y -> -inf
    UnitVec3 t_plus;
    double oscillation_amplitude = 0.0;  // residual T oscillation in the last window
};

// Limits extracted by averaging T over the last local torsion period
// (length ~ 4 pi / y) at two stations, then extrapolating in 1/y.
AsymptoticTangents asymptotic_tangents(const ProfileTrajectory& traj);

// Interior corner angle between the rays -T^{-inf} and T^{+inf}.
double measured_corner_angle(double alpha, double y_max = 200.0, double dy = 0.005);
double measured_corner_angle(const ProfileTrajectory& traj);

struct State {
    Vec3 point;
    Vec3 tangent;
};

// chi(t,x) = sqrt(t) G(x/sqrt(t)) and its tangent. Requires |x|/sqrt(t) <= y_max.
State selfsimilar_state(const ProfileTrajectory& traj, double t, double x);

// The t -> 0 limit line: two half lines joined at the origin.
Vec3 limit_point(const AsymptoticTangents& at, double x);

}  // namespace filament::selfsimilar

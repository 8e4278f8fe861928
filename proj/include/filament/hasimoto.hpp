// Frame reconstruction from u by the coupled linear systems: integrate in
// time along x = x0 (T_t = Im(conj(u_x) N), N_t = -i u_x T + (i/2)(|u|^2 -
// M/t) N), then in space at fixed t (T_x = Re(conj(u) N), N_x = -u T).
// The space march streams its fine grid through chunk observers so that
// oscillatory quadratures run without storing the full resolution field.
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "filament/ansatz.hpp"
#include "filament/geometry.hpp"
#include "filament/vec3.hpp"

namespace filament::hasimoto {

struct TimeMarchOptions {
    double eps_rot = 0.02;    // max frame rotation per step
    double eps_phase = 0.10;  // max coefficient phase advance per step
    double h_max_factor = 0.05;  // additional cap h <= factor * t
    double h_min = 1e-14;     // step underflow guard
    long max_steps = 50'000'000;
};

struct TimeMarchResult {
    Frame frame;
    Vec3 point;                   // anchor transported by chi_t = Im(conj(u) N)
    double reached_t = 0.0;
    long steps = 0;
    double max_defect = 0.0;      // worst pre-projection orthonormality drift
};

// March from (t0, x0) to (t_target, x0); both times positive, either order.
// Throws on step underflow, reporting the reached time.
TimeMarchResult integrate_frame_in_time(const ansatz::AnsatzField& u, double x0,
                                        const Frame& frame0, double t0, double t_target,
                                        const TimeMarchOptions& opts = {},
                                        const Vec3& anchor_point = {0, 0, 0});

// A contiguous run of fine-grid nodes. x_i = x_start + i*h (h signed);
// arrays hold per-node T and T_x = Re(conj(u) N) components. Consecutive
// chunks share their boundary node. Interval count per chunk is even.
struct ChunkView {
    double x_start = 0.0;
    double h = 0.0;
    size_t nodes = 0;
    const double* T[3] = {nullptr, nullptr, nullptr};
    const double* Tx[3] = {nullptr, nullptr, nullptr};
};
using ChunkSink = std::function<void(const ChunkView&)>;

struct SpaceMarchOptions {
    double eps_phase = 0.30;   // max integrand phase advance per fine step
    double extra_rate = 0.0;   // additional rate to resolve (e.g. 2 pi max|xi|)
    double store_dx = 5e-4;    // target spacing of the stored field
    size_t chunk_intervals = 1 << 17;
    long max_fine_steps = 2'000'000'000;
    bool parallel = true;      // run left/right marches concurrently
};

// Sampled frames over a uniform grid at fixed time.
struct FrameField {
    double t = 0.0;
    double x_min = 0.0;
    double dx = 0.0;
    std::vector<Frame> frames;
    std::vector<Vec3> tx;       // Re(conj(u) N) at the stored nodes
    double max_defect = 0.0;    // worst pre-projection drift over the march
    double fine_dx = 0.0;

    size_t size() const { return frames.size(); }
    double x_at(size_t i) const { return x_min + double(i) * dx; }
    double x_max() const { return x_at(size() - 1); }
    Vec3 tangent_at(double x) const;  // linear interpolation, renormalized
    // Average of T over [a, b] (Simpson on the stored grid); rides out the
    // small-scale oscillation when probing segment directions.
    Vec3 probe_direction(double a, double b) const;
    std::string to_csv() const;
};

// Marches left and right from x0, storing every K-th node and streaming all
// fine nodes through the per-direction sinks. frame_at_x0 applies at x0.
FrameField integrate_frame_in_space(const ansatz::AnsatzField& u, double t,
                                    const Frame& frame_at_x0, double x0, double x_min,
                                    double x_max, const SpaceMarchOptions& opts = {},
                                    ChunkSink sink_left = nullptr,
                                    ChunkSink sink_right = nullptr);

struct Curve {
    double t = 0.0;
    double x_min = 0.0, dx = 0.0;
    std::vector<Vec3> points;
    double x_at(size_t i) const { return x_min + double(i) * dx; }
    size_t size() const { return points.size(); }
    std::string to_csv() const;
};

// Cumulative integration of T from the anchor (x0 snapped to the grid).
Curve reconstruct_curve(const FrameField& field, double x0, const Vec3& anchor_point);

struct LimitError {
    double sup = 0.0;          // max |T(t,x) - T(0,x)| away from half-integers
    int excluded = 0;          // grid points inside the half-integer margin
    double align_residual = 0.0;  // rigid alignment residual (radians)
};

// Sup distance between the (rigidly aligned) frame field tangents and the
// t = 0 polyline directions, excluding a margin around (1/2) Z.
LimitError polyline_limit_error(double t, const geometry::PolyLine& poly,
                                const FrameField& field, double half_integer_margin = 0.05);

// Windowed segment-direction probes: one direction per polyline segment,
// measured from the field by averaging away from the corners.
std::vector<Vec3> measure_segment_directions(const geometry::PolyLine& poly,
                                             const FrameField& field);

}  // namespace filament::hasimoto

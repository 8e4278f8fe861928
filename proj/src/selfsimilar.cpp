#include "filament/selfsimilar.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace filament::selfsimilar {

namespace {
constexpr double kPi = std::numbers::pi;

struct FrenetState {
    Vec3 G, T, n, b;
};

FrenetState rhs(const FrenetState& s, double y, double c) {
    const double tau = 0.5 * y;
    FrenetState d;
    d.G = s.T;
    d.T = c * s.n;
    d.n = -c * s.T + tau * s.b;
    d.b = -tau * s.n;
    return d;
}

FrenetState axpy(const FrenetState& a, double h, const FrenetState& d) {
    return {a.G + h * d.G, a.T + h * d.T, a.n + h * d.n, a.b + h * d.b};
}

double frame_defect(const FrenetState& s) {
    double d = 0.0;
    d = std::max(d, std::abs(dot(s.T, s.T) - 1.0));
    d = std::max(d, std::abs(dot(s.n, s.n) - 1.0));
    d = std::max(d, std::abs(dot(s.b, s.b) - 1.0));
    d = std::max(d, std::abs(dot(s.T, s.n)));
    d = std::max(d, std::abs(dot(s.T, s.b)));
    d = std::max(d, std::abs(dot(s.n, s.b)));
    return d;
}

void reproject(FrenetState& s) {
    s.T = normalized(s.T);
    s.n = normalized(s.n - dot(s.n, s.T) * s.T);
    s.b = normalized(s.b - dot(s.b, s.T) * s.T - dot(s.b, s.n) * s.n);
}

FrenetState rk4_step(const FrenetState& s, double y, double h, double c) {
    const FrenetState k1 = rhs(s, y, c);
    const FrenetState k2 = rhs(axpy(s, 0.5 * h, k1), y + 0.5 * h, c);
    const FrenetState k3 = rhs(axpy(s, 0.5 * h, k2), y + 0.5 * h, c);
    const FrenetState k4 = rhs(axpy(s, h, k3), y + h, c);
    FrenetState out = s;
    out.G += (h / 6.0) * (k1.G + 2.0 * k2.G + 2.0 * k3.G + k4.G);
    out.T += (h / 6.0) * (k1.T + 2.0 * k2.T + 2.0 * k3.T + k4.T);
    out.n += (h / 6.0) * (k1.n + 2.0 * k2.n + 2.0 * k3.n + k4.n);
    out.b += (h / 6.0) * (k1.b + 2.0 * k2.b + 2.0 * k3.b + k4.b);
    return out;
}

}  // namespace

Vec3 ProfileTrajectory::point(double y) const {
    if (std::abs(y) > y_max) throw std::domain_error("ProfileTrajectory: y outside stored range");
    const double f = (y + y_max) / dy;
    const size_t i = std::min(size_t(std::max(f, 0.0)), points.size() - 2);
    const double w = f - double(i);
    return points[i] * (1.0 - w) + points[i + 1] * w;
}

Vec3 ProfileTrajectory::tangent(double y) const {
    if (std::abs(y) > y_max) throw std::domain_error("ProfileTrajectory: y outside stored range");
    const double f = (y + y_max) / dy;
    const size_t i = std::min(size_t(std::max(f, 0.0)), frames.size() - 2);
    const double w = f - double(i);
    return normalized(frames[i].T * (1.0 - w) + frames[i + 1].T * w);
}

ProfileTrajectory integrate_profile(double alpha, double y_max, double dy,
                                    const ProfileOptions& opts) {
    if (!(alpha >= 0.0)) throw std::domain_error("integrate_profile: alpha must be >= 0");
    if (!(y_max >= 50.0)) throw std::domain_error("integrate_profile: y_max must be >= 50");
    if (!(dy > 0.0)) throw std::domain_error("integrate_profile: dy must be positive");

    const size_t half = size_t(std::ceil(y_max / dy));
    const double dy_eff = y_max / double(half);

    ProfileTrajectory traj;
    traj.alpha = alpha;
    traj.y_max = y_max;
    traj.dy = dy_eff;
    traj.points.assign(2 * half + 1, Vec3{});
    traj.frames.assign(2 * half + 1, FrenetFrame{});

    const FrenetState start{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    const size_t mid = half;
    traj.points[mid] = start.G;
    traj.frames[mid] = {start.T, start.n, start.b};

    for (int dir = -1; dir <= 1; dir += 2) {
        FrenetState s = start;
        for (size_t cell = 0; cell < half; ++cell) {
            const double y0 = double(dir) * double(cell) * dy_eff;
            // resolve the local rotation rate sqrt(c^2 + tau^2)
            const double w_max =
                std::sqrt(alpha * alpha + 0.25 * (std::abs(y0) + dy_eff) * (std::abs(y0) + dy_eff));
            int nsub = std::max(1, int(std::ceil(dy_eff * w_max / opts.eps_rot)));
            if (nsub > opts.max_substeps)
                throw std::runtime_error("integrate_profile: substep cap exceeded; dy too coarse");
            const double h = double(dir) * dy_eff / double(nsub);
            for (int k = 0; k < nsub; ++k) {
                s = rk4_step(s, y0 + double(k) * h, h, alpha);
                traj.max_frame_defect = std::max(traj.max_frame_defect, frame_defect(s));
                reproject(s);
            }
            const size_t store = (dir > 0) ? (mid + cell + 1) : (mid - cell - 1);
            traj.points[store] = s.G;
            traj.frames[store] = {s.T, s.n, s.b};
        }
    }
    return traj;
}

namespace {

// Average T over [y1, y2] with the trapezoid rule on the stored grid.
Vec3 window_average_T(const ProfileTrajectory& traj, double y1, double y2) {
    const size_t n = 200;
    const double h = (y2 - y1) / double(n);
    Vec3 acc{0, 0, 0};
    for (size_t i = 0; i <= n; ++i) {
        const double w = (i == 0 || i == n) ? 0.5 : 1.0;
        acc += w * traj.tangent(y1 + double(i) * h);
    }
    return acc / double(n);
}

double window_oscillation(const ProfileTrajectory& traj, double y1, double y2, const Vec3& mean) {
    double amp = 0.0;
    const size_t n = 200;
    const double h = (y2 - y1) / double(n);
    for (size_t i = 0; i <= n; ++i)
        amp = std::max(amp, dist(traj.tangent(y1 + double(i) * h), mean));
    return amp;
}

UnitVec3 extract_limit(const ProfileTrajectory& traj, int dir, double* osc_out) {
    if (traj.alpha == 0.0) {
        if (osc_out) *osc_out = 0.0;
        return UnitVec3{1, 0, 0};
    }
    const double Y = traj.y_max;
    // local torsion period 2 pi / tau(y) = 4 pi / y
    auto station = [&](double y_end) {
        const double period = 4.0 * kPi / y_end;
        const double y1 = dir * (y_end - period), y2 = dir * y_end;
        return window_average_T(traj, std::min(y1, y2), std::max(y1, y2));
    };
    const double yA = Y, yB = 0.8 * Y;
    const Vec3 A = station(yA), B = station(yB);
    // one-term 1/y extrapolation: T(y) ~ T_inf + c / y
    const double cA = yA - 0.5 * 4.0 * kPi / yA, cB = yB - 0.5 * 4.0 * kPi / yB;  // window centers
    const Vec3 lim = (A * cA - B * cB) / (cA - cB);
    if (osc_out) {
        const double period = 4.0 * kPi / yA;
        const double lo = dir > 0 ? yA - period : -yA;
        const double hi = dir > 0 ? yA : -yA + period;
        *osc_out = window_oscillation(traj, lo, hi, A);
    }
    return UnitVec3(lim);
}

}  // namespace

AsymptoticTangents asymptotic_tangents(const ProfileTrajectory& traj) {
    AsymptoticTangents at;
    double osc_p = 0.0, osc_m = 0.0;
    at.t_plus = extract_limit(traj, +1, &osc_p);
    at.t_minus = extract_limit(traj, -1, &osc_m);
    at.oscillation_amplitude = std::max(osc_p, osc_m);

    if (traj.alpha > 0.0) {
        // convergence sanity: the oscillation about the limit must shrink with y
        const double period = 4.0 * kPi / (0.6 * traj.y_max);
        const Vec3 early = window_average_T(traj, 0.6 * traj.y_max - period, 0.6 * traj.y_max);
        const double osc_early =
            window_oscillation(traj, 0.6 * traj.y_max - period, 0.6 * traj.y_max, early);
        if (osc_p > 2.0 * osc_early + 1e-9)
            throw std::runtime_error(
                "asymptotic_tangents: tangent oscillation not decreasing; enlarge y_max");
    }
    return at;
}

double measured_corner_angle(const ProfileTrajectory& traj) {
    const AsymptoticTangents at = asymptotic_tangents(traj);
    const double c = dot(-1.0 * Vec3(at.t_minus), Vec3(at.t_plus));
    return std::acos(std::clamp(c, -1.0, 1.0));
}

double measured_corner_angle(double alpha, double y_max, double dy) {
    if (!(alpha >= 0.0)) throw std::domain_error("measured_corner_angle: alpha must be >= 0");
    return measured_corner_angle(integrate_profile(alpha, y_max, dy));
}

State selfsimilar_state(const ProfileTrajectory& traj, double t, double x) {
    if (!(t > 0.0)) throw std::domain_error("selfsimilar_state: t must be positive");
    const double s = std::sqrt(t);
    const double y = x / s;
    if (std::abs(y) > traj.y_max)
        throw std::domain_error("selfsimilar_state: x/sqrt(t) outside trajectory range; extend y_max");
    return {traj.point(y) * s, traj.tangent(y)};
}

Vec3 limit_point(const AsymptoticTangents& at, double x) {
    return (x >= 0.0) ? Vec3(at.t_plus) * x : Vec3(at.t_minus) * x;
}

}  // namespace filament::selfsimilar

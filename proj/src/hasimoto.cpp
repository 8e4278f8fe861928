#include "filament/hasimoto.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <numbers>
#include <stdexcept>

#include "filament/align.hpp"

namespace filament::hasimoto {

namespace {

// 9-dimensional frame state as plain arrays for the hot loops.
struct FS {
    double v[9];  // T, e1, e2
    Frame to_frame() const {
        Frame f;
        f.T = {v[0], v[1], v[2]};
        f.e1 = {v[3], v[4], v[5]};
        f.e2 = {v[6], v[7], v[8]};
        return f;
    }
    static FS from_frame(const Frame& f) {
        return {{f.T.x, f.T.y, f.T.z, f.e1.x, f.e1.y, f.e1.z, f.e2.x, f.e2.y, f.e2.z}};
    }
};

double fs_defect(const FS& s) { return s.to_frame().orthonormality_defect(); }

void fs_reproject(FS& s) {
    Frame f = s.to_frame();
    f.orthonormalize();
    s = FS::from_frame(f);
}

// Space system: T' = a e1 + b e2, e1' = -a T, e2' = -b T with u = a + i b.
inline void space_rhs(const FS& s, double a, double b, FS& d) {
    for (int c = 0; c < 3; ++c) {
        d.v[c] = a * s.v[3 + c] + b * s.v[6 + c];
        d.v[3 + c] = -a * s.v[c];
        d.v[6 + c] = -b * s.v[c];
    }
}

// Time system: T' = p e2 - q e1, e1' = q T - (g/2) e2, e2' = -p T + (g/2) e1
// with u_x = p + i q and g = |u|^2 - M/t.
inline void time_rhs(const FS& s, double p, double q, double half_g, FS& d) {
    for (int c = 0; c < 3; ++c) {
        d.v[c] = p * s.v[6 + c] - q * s.v[3 + c];
        d.v[3 + c] = q * s.v[c] - half_g * s.v[6 + c];
        d.v[6 + c] = -p * s.v[c] + half_g * s.v[3 + c];
    }
}

inline void fs_axpy(const FS& a, double h, const FS& d, FS& out) {
    for (int i = 0; i < 9; ++i) out.v[i] = a.v[i] + h * d.v[i];
}

}  // namespace

TimeMarchResult integrate_frame_in_time(const ansatz::AnsatzField& u, double x0,
                                        const Frame& frame0, double t0, double t_target,
                                        const TimeMarchOptions& opts, const Vec3& anchor_point) {
    if (!(t0 > 0.0) || !(t_target > 0.0))
        throw std::domain_error("integrate_frame_in_time: times must be positive");

    const double M = u.mass_constant();
    const int dir = (t_target >= t0) ? +1 : -1;

    FS s = FS::from_frame(frame0);
    Vec3 point = anchor_point;
    double t = t0;
    TimeMarchResult res;

    // coefficient magnitudes and phase rates bounding the step size
    int max_abs_pos = u.corners().max_abs_position();
    const double span = std::abs(x0) + double(max_abs_pos);

    auto rhs_at = [&](const FS& state, double tt, FS& d) {
        const cplx ux = u.eval_ux(tt, x0);
        const cplx uu = u.eval_u(tt, x0);
        time_rhs(state, ux.real(), ux.imag(), 0.5 * (std::norm(uu) - M / tt), d);
    };

    long steps = 0;
    while (true) {
        if (std::abs(t - t_target) <= 0.0) break;
        if ((dir > 0 && t >= t_target) || (dir < 0 && t <= t_target)) break;
        if (++steps > opts.max_steps)
            throw std::runtime_error("integrate_frame_in_time: step budget exhausted at t=" +
                                     std::to_string(t));

        const cplx ux = u.eval_ux(t, x0);
        const cplx uu = u.eval_u(t, x0);
        const double g = std::abs(std::norm(uu) - M / t);
        const double rot_rate = std::abs(ux) + 0.5 * g;
        // quadratic-phase rate of the coefficients: (x0 - j)^2 / (4 t^2)
        const double phase_rate = span * span / (4.0 * t * t) + 1e-300;

        double h = std::min({opts.eps_rot / std::max(rot_rate, 1e-300),
                             opts.eps_phase / phase_rate, opts.h_max_factor * t});
        h = std::min(h, std::abs(t_target - t));
        if (h < opts.h_min)
            throw std::runtime_error("integrate_frame_in_time: step underflow near t=" +
                                     std::to_string(t) + " (reached " + std::to_string(t) + ")");
        const double hs = dir * h;

        FS k1, k2, k3, k4, tmp;
        rhs_at(s, t, k1);
        fs_axpy(s, 0.5 * hs, k1, tmp);
        rhs_at(tmp, t + 0.5 * hs, k2);
        fs_axpy(s, 0.5 * hs, k2, tmp);
        rhs_at(tmp, t + 0.5 * hs, k3);
        fs_axpy(s, hs, k3, tmp);
        rhs_at(tmp, t + hs, k4);

        FS next;
        for (int i = 0; i < 9; ++i)
            next.v[i] = s.v[i] + (hs / 6.0) * (k1.v[i] + 2 * k2.v[i] + 2 * k3.v[i] + k4.v[i]);

        // transport the curve anchor: chi_t = Im(conj(u) N)
        auto chi_dot = [&](const FS& state, double tt) {
            const cplx uc = u.eval_u(tt, x0);
            const double a = uc.real(), b = uc.imag();
            // Im((a - ib)(e1 + i e2)) = a e2 - b e1
            return Vec3{a * state.v[6] - b * state.v[3], a * state.v[7] - b * state.v[4],
                        a * state.v[8] - b * state.v[5]};
        };
        const Vec3 c1 = chi_dot(s, t);
        FS mid1, mid2, end;
        fs_axpy(s, 0.5 * hs, k1, mid1);
        const Vec3 c2 = chi_dot(mid1, t + 0.5 * hs);
        fs_axpy(s, 0.5 * hs, k2, mid2);
        const Vec3 c3 = chi_dot(mid2, t + 0.5 * hs);
        fs_axpy(s, hs, k3, end);
        const Vec3 c4 = chi_dot(end, t + hs);
        point += (hs / 6.0) * (c1 + 2.0 * c2 + 2.0 * c3 + c4);

        res.max_defect = std::max(res.max_defect, fs_defect(next));
        fs_reproject(next);
        s = next;
        t += hs;
    }

    res.frame = s.to_frame();
    res.point = point;
    res.reached_t = t;
    res.steps = steps;
    return res;
}

Vec3 FrameField::tangent_at(double x) const {
    const double f = (x - x_min) / dx;
    if (f < 0.0 || f > double(size() - 1) + 1e-9)
        throw std::domain_error("FrameField::tangent_at: x outside stored grid");
    const size_t i = std::min(size_t(std::max(f, 0.0)), size() - 2);
    const double w = f - double(i);
    return normalized(frames[i].T * (1.0 - w) + frames[i + 1].T * w);
}

Vec3 FrameField::probe_direction(double a, double b) const {
    if (!(b > a)) throw std::invalid_argument("probe_direction: empty window");
    size_t i0 = size_t(std::ceil((a - x_min) / dx));
    size_t i1 = size_t(std::floor((b - x_min) / dx));
    i1 = std::min(i1, size() - 1);
    if (i1 <= i0 + 2) throw std::invalid_argument("probe_direction: window under-resolved");
    if ((i1 - i0) % 2 != 0) --i1;
    Vec3 acc{0, 0, 0};
    for (size_t i = i0; i <= i1; ++i) {
        double w = (i == i0 || i == i1) ? 1.0 : ((i - i0) % 2 ? 4.0 : 2.0);
        acc += w * frames[i].T;
    }
    return normalized(acc);
}

std::string FrameField::to_csv() const {
    std::string out = "x,Tx,Ty,Tz,e1x,e1y,e1z,e2x,e2y,e2z,txx,txy,txz\n";
    char line[420];
    for (size_t i = 0; i < size(); ++i) {
        const Frame& f = frames[i];
        std::snprintf(line, sizeof(line),
                      "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      x_at(i), f.T.x, f.T.y, f.T.z, f.e1.x, f.e1.y, f.e1.z, f.e2.x, f.e2.y,
                      f.e2.z, tx[i].x, tx[i].y, tx[i].z);
        out += line;
    }
    return out;
}

namespace {

struct HalfMarchResult {
    std::vector<Frame> frames;  // stored nodes, excluding x0 (index 0 = first stored)
    std::vector<Vec3> tx;
    double max_defect = 0.0;
};

// March one direction from x0 to x_end on the uniform fine grid, storing
// every store_every-th node and streaming chunks to the sink.
HalfMarchResult march_half(const ansatz::AnsatzField& u, double t, const FS& start, double x0,
                           double h_fine, size_t n_fine, size_t store_every, size_t chunk_intervals,
                           const ChunkSink& sink) {
    HalfMarchResult out;
    out.frames.reserve(n_fine / store_every + 1);
    out.tx.reserve(n_fine / store_every + 1);

    const size_t cap = chunk_intervals + 1;
    std::vector<double> bufT[3], bufTx[3];
    for (int c = 0; c < 3; ++c) {
        bufT[c].resize(sink ? cap : 0);
        bufTx[c].resize(sink ? cap : 0);
    }

    FS s = start;
    double defect = 0.0;

    auto tx_of = [&](const FS& state, double x, Vec3& txv) {
        const cplx uu = u.eval_u(t, x);
        const double a = uu.real(), b = uu.imag();
        txv = {a * state.v[3] + b * state.v[6], a * state.v[4] + b * state.v[7],
               a * state.v[5] + b * state.v[8]};
    };

    size_t emitted_in_chunk = 0;
    double chunk_x0 = x0;
    auto push_node = [&](const FS& state, double x, size_t fine_index) {
        Vec3 txv;
        tx_of(state, x, txv);
        if (sink) {
            const Frame f = state.to_frame();
            bufT[0][emitted_in_chunk] = f.T.x;
            bufT[1][emitted_in_chunk] = f.T.y;
            bufT[2][emitted_in_chunk] = f.T.z;
            bufTx[0][emitted_in_chunk] = txv.x;
            bufTx[1][emitted_in_chunk] = txv.y;
            bufTx[2][emitted_in_chunk] = txv.z;
            ++emitted_in_chunk;
            if (emitted_in_chunk == cap || fine_index == n_fine) {
                ChunkView cv;
                cv.x_start = chunk_x0;
                cv.h = h_fine;
                cv.nodes = emitted_in_chunk;
                for (int c = 0; c < 3; ++c) {
                    cv.T[c] = bufT[c].data();
                    cv.Tx[c] = bufTx[c].data();
                }
                sink(cv);
                // next chunk starts at this node (shared endpoint)
                bufT[0][0] = bufT[0][emitted_in_chunk - 1];
                bufT[1][0] = bufT[1][emitted_in_chunk - 1];
                bufT[2][0] = bufT[2][emitted_in_chunk - 1];
                bufTx[0][0] = bufTx[0][emitted_in_chunk - 1];
                bufTx[1][0] = bufTx[1][emitted_in_chunk - 1];
                bufTx[2][0] = bufTx[2][emitted_in_chunk - 1];
                chunk_x0 = x;
                emitted_in_chunk = 1;
            }
        }
        if (fine_index % store_every == 0 && fine_index > 0) {
            out.frames.push_back(state.to_frame());
            out.tx.push_back(txv);
        }
    };

    push_node(s, x0, 0);

    FS k1, k2, k3, k4, tmp;
    for (size_t i = 0; i < n_fine; ++i) {
        const double x = x0 + double(i) * h_fine;
        const cplx u0 = u.eval_u(t, x);
        const cplx um = u.eval_u(t, x + 0.5 * h_fine);
        const cplx u1 = u.eval_u(t, x + h_fine);

        space_rhs(s, u0.real(), u0.imag(), k1);
        fs_axpy(s, 0.5 * h_fine, k1, tmp);
        space_rhs(tmp, um.real(), um.imag(), k2);
        fs_axpy(s, 0.5 * h_fine, k2, tmp);
        space_rhs(tmp, um.real(), um.imag(), k3);
        fs_axpy(s, h_fine, k3, tmp);
        space_rhs(tmp, u1.real(), u1.imag(), k4);

        for (int c = 0; c < 9; ++c)
            s.v[c] += (h_fine / 6.0) * (k1.v[c] + 2 * k2.v[c] + 2 * k3.v[c] + k4.v[c]);

        if ((i & 1023) == 0) defect = std::max(defect, fs_defect(s));
        fs_reproject(s);
        push_node(s, x0 + double(i + 1) * h_fine, i + 1);
    }

    out.max_defect = defect;
    return out;
}

}  // namespace

FrameField integrate_frame_in_space(const ansatz::AnsatzField& u, double t,
                                    const Frame& frame_at_x0, double x0, double x_min,
                                    double x_max, const SpaceMarchOptions& opts,
                                    ChunkSink sink_left, ChunkSink sink_right) {
    if (!(t > 0.0)) throw std::domain_error("integrate_frame_in_space: t must be positive");
    if (!(x_min < x0 && x0 < x_max))
        throw std::invalid_argument("integrate_frame_in_space: need x_min < x0 < x_max");

    // worst local oscillation of u over the domain plus any extra kernel rate
    const double span = std::max(std::abs(x_min), std::abs(x_max)) +
                        double(u.corners().max_abs_position());
    const double rate = span / (2.0 * t) + opts.extra_rate + 1.0;
    double h_fine = opts.eps_phase / rate;

    const double half_span = std::max(x_max - x0, x0 - x_min);
    if (half_span / h_fine > double(opts.max_fine_steps))
        throw std::runtime_error(
            "integrate_frame_in_space: refinement would exceed the step budget; "
            "suggested coarser dx = " +
            std::to_string(half_span / double(opts.max_fine_steps)));

    // store every K-th fine node; K even keeps Simpson chunk parity intact
    size_t store_every = std::max<size_t>(1, size_t(std::llround(opts.store_dx / h_fine)));
    if (store_every > 1 && store_every % 2) ++store_every;

    auto fine_count = [&](double dist) {
        size_t n = size_t(std::ceil(dist / h_fine));
        n = ((n + store_every - 1) / store_every) * store_every;  // land on stored nodes
        return std::max(n, store_every);
    };
    const size_t n_right = fine_count(x_max - x0);
    const size_t n_left = fine_count(x0 - x_min);

    const FS start = FS::from_frame(frame_at_x0);

    HalfMarchResult right, left;
    if (opts.parallel) {
        auto fut = std::async(std::launch::async, [&] {
            return march_half(u, t, start, x0, h_fine, n_right, store_every,
                              opts.chunk_intervals, sink_right);
        });
        left = march_half(u, t, start, x0, -h_fine, n_left, store_every, opts.chunk_intervals,
                          sink_left);
        right = fut.get();
    } else {
        right = march_half(u, t, start, x0, h_fine, n_right, store_every, opts.chunk_intervals,
                           sink_right);
        left = march_half(u, t, start, x0, -h_fine, n_left, store_every, opts.chunk_intervals,
                          sink_left);
    }

    FrameField field;
    field.t = t;
    field.dx = h_fine * double(store_every);
    field.fine_dx = h_fine;
    field.x_min = x0 - double(left.frames.size()) * field.dx;
    field.max_defect = std::max(left.max_defect, right.max_defect);

    field.frames.reserve(left.frames.size() + right.frames.size() + 1);
    field.tx.reserve(field.frames.capacity());
    for (size_t i = left.frames.size(); i-- > 0;) {
        field.frames.push_back(left.frames[i]);
        field.tx.push_back(left.tx[i]);
    }
    {
        // the shared x0 node
        FS s0 = start;
        const cplx uu = u.eval_u(t, x0);
        Vec3 txv{uu.real() * s0.v[3] + uu.imag() * s0.v[6],
                 uu.real() * s0.v[4] + uu.imag() * s0.v[7],
                 uu.real() * s0.v[5] + uu.imag() * s0.v[8]};
        field.frames.push_back(frame_at_x0);
        field.tx.push_back(txv);
    }
    for (size_t i = 0; i < right.frames.size(); ++i) {
        field.frames.push_back(right.frames[i]);
        field.tx.push_back(right.tx[i]);
    }
    return field;
}

Curve reconstruct_curve(const FrameField& field, double x0, const Vec3& anchor_point) {
    Curve c;
    c.t = field.t;
    c.x_min = field.x_min;
    c.dx = field.dx;
    c.points.assign(field.size(), Vec3{});

    const long i0 = std::lround((x0 - field.x_min) / field.dx);
    if (i0 < 0 || size_t(i0) >= field.size())
        throw std::invalid_argument("reconstruct_curve: anchor outside the field grid");

    const double h = field.dx;
    auto Tat = [&](size_t i) { return field.frames[i].T; };

    c.points[i0] = anchor_point;
    const long last = long(field.size()) - 1;
    // per-interval three-point rule: int_{x0}^{x1} f = h/12 (5 f0 + 8 f1 - f2)
    for (long a = i0; a < last; ++a) {
        const Vec3 f0 = Tat(size_t(a)), f1 = Tat(size_t(a + 1));
        const Vec3 inc = (a + 2 <= last)
                             ? (h / 12.0) * (5.0 * f0 + 8.0 * f1 - Tat(size_t(a + 2)))
                             : (h / 12.0) * (-Tat(size_t(a - 1)) + 8.0 * f0 + 5.0 * f1);
        c.points[size_t(a + 1)] = c.points[size_t(a)] + inc;
    }
    for (long a = i0; a > 0; --a) {
        const Vec3 f0 = Tat(size_t(a - 1)), f1 = Tat(size_t(a));
        const Vec3 inc = (a - 2 >= 0)
                             ? (h / 12.0) * (-Tat(size_t(a - 2)) + 8.0 * f0 + 5.0 * f1)
                             : (h / 12.0) * (5.0 * f0 + 8.0 * f1 - Tat(size_t(a + 1)));
        c.points[size_t(a - 1)] = c.points[size_t(a)] - inc;
    }
    return c;
}

std::string Curve::to_csv() const {
    std::string out = "x,px,py,pz\n";
    char line[160];
    for (size_t i = 0; i < size(); ++i) {
        std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%.17g\n", x_at(i), points[i].x,
                      points[i].y, points[i].z);
        out += line;
    }
    return out;
}

std::vector<Vec3> measure_segment_directions(const geometry::PolyLine& poly,
                                             const FrameField& field) {
    const auto& entries = poly.corners.entries;
    std::vector<Vec3> dirs;
    const double lo = field.x_min, hi = field.x_max();
    const int K = static_cast<int>(entries.size());
    for (int seg = 0; seg <= K; ++seg) {
        double a = (seg == 0) ? lo : double(entries[seg - 1].position);
        double b = (seg == K) ? hi : double(entries[seg].position);
        // keep clear of the corners and cap ray windows
        const double pad = 0.25 * std::min(2.0, b - a);
        a += pad;
        b -= pad;
        if (seg == 0) a = std::max(a, b - 2.0);
        if (seg == K) b = std::min(b, a + 2.0);
        dirs.push_back(field.probe_direction(a, b));
    }
    return dirs;
}

LimitError polyline_limit_error(double t, const geometry::PolyLine& poly,
                                const FrameField& field, double half_integer_margin) {
    LimitError le;
    if (!(t > 0.0)) {
        // direct polyline sampling: zero by definition
        return le;
    }

    // rigidly align the measured segment directions with the canonical ones
    std::vector<Vec3> measured = measure_segment_directions(poly, field);
    std::vector<Vec3> target;
    for (const auto& d : poly.segment_directions) target.push_back(d);
    const Mat3 R = kabsch_rotation(measured, target);
    le.align_residual = alignment_residual(R, measured, target);

    for (size_t i = 0; i < field.size(); ++i) {
        const double x = field.x_at(i);
        const double d_half = std::abs(x * 2.0 - std::round(x * 2.0)) / 2.0;
        if (d_half < half_integer_margin) {
            ++le.excluded;
            continue;
        }
        const Vec3 Trot = apply(R, field.frames[i].T);
        le.sup = std::max(le.sup, dist(Trot, Vec3(poly.direction_at(x))));
    }
    return le;
}

}  // namespace filament::hasimoto

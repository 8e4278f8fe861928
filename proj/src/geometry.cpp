#include "filament/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace filament::geometry {

namespace {
constexpr double kPi = std::numbers::pi;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}
}  // namespace

double alpha_from_angle(double theta) {
    if (!(theta > 0.0) || theta > kPi)
        throw std::domain_error("alpha_from_angle: theta must lie in (0, pi]");
    // sin(theta/2) = exp(-(pi/2) a^2)  =>  a = sqrt((-2/pi) log sin(theta/2))
    const double s = std::sin(0.5 * theta);
    const double a2 = (-2.0 / kPi) * std::log(s);
    return std::sqrt(std::max(a2, 0.0));
}

double angle_from_alpha(double alpha) {
    if (!(alpha >= 0.0)) throw std::domain_error("angle_from_alpha: alpha must be >= 0");
    return 2.0 * std::asin(std::exp(-0.5 * kPi * alpha * alpha));
}

CornerData::CornerData(std::vector<Corner> corners, double s) : entries(std::move(corners)), weight_s(s) {
    if (!(s > 0.5)) throw std::domain_error("CornerData: weight exponent s must exceed 1/2");
    for (size_t i = 1; i < entries.size(); ++i)
        if (entries[i].position <= entries[i - 1].position)
            throw std::invalid_argument("CornerData: positions must be strictly increasing");
    double m = 0.0, w = 0.0;
    for (const auto& c : entries) {
        const double a2 = std::norm(c.alpha);
        m += a2;
        w += std::pow(1.0 + double(c.position) * c.position, s) * a2;
    }
    mass = m;
    weighted_norm = std::sqrt(w);
}

int CornerData::max_abs_position() const {
    int m = 0;
    for (const auto& c : entries) m = std::max(m, std::abs(c.position));
    return m;
}

CornerData CornerData::two_corner(double theta) {
    const double a = alpha_from_angle(theta);
    return CornerData({{-1, {a, 0.0}}, {1, {a, 0.0}}});
}

CornerData CornerData::equal_angle(int n_corners, double theta) {
    if (n_corners <= 0 || n_corners % 2 != 0)
        throw std::invalid_argument("equal_angle: corner count must be a positive even number");
    const double a = alpha_from_angle(theta);
    std::vector<Corner> cs;
    for (int j = -n_corners + 1; j <= n_corners - 1; j += 2) cs.push_back({j, {a, 0.0}});
    return CornerData(std::move(cs));
}

UnitVec3 PolyLine::direction_at(double x) const {
    int seg = 0;
    for (size_t k = 0; k < corners.entries.size(); ++k)
        if (x >= corners.entries[k].position) seg = static_cast<int>(k) + 1;
    return segment_directions[seg];
}

UnitVec3 PolyLine::tangent_left(int corner_pos) const {
    for (size_t k = 0; k < corners.entries.size(); ++k)
        if (corners.entries[k].position == corner_pos) return segment_directions[k];
    throw std::invalid_argument("tangent_left: no corner at given position");
}

UnitVec3 PolyLine::tangent_right(int corner_pos) const {
    for (size_t k = 0; k < corners.entries.size(); ++k)
        if (corners.entries[k].position == corner_pos) return segment_directions[k + 1];
    throw std::invalid_argument("tangent_right: no corner at given position");
}

Vec3 PolyLine::point_at(double x) const {
    // chi(0) = 0; integrate the piecewise-constant tangent over [0, x].
    const double lo = std::min(0.0, x), hi = std::max(0.0, x);
    std::vector<double> cuts{lo};
    for (const auto& c : corners.entries)
        if (c.position > lo && c.position < hi) cuts.push_back(double(c.position));
    cuts.push_back(hi);
    Vec3 p{0, 0, 0};
    for (size_t i = 0; i + 1 < cuts.size(); ++i)
        p += Vec3(direction_at(0.5 * (cuts[i] + cuts[i + 1]))) * (cuts[i + 1] - cuts[i]);
    return (x >= 0.0) ? p : -p;
}

std::string PolyLine::to_json() const {
    std::string out = "{\"corners\":[";
    for (size_t i = 0; i < corners.entries.size(); ++i) {
        const auto& c = corners.entries[i];
        if (i) out += ",";
        out += "{\"pos\":" + std::to_string(c.position) +
               ",\"alpha_re\":" + fmt17(c.alpha.real()) +
               ",\"alpha_im\":" + fmt17(c.alpha.imag()) + "}";
    }
    out += "],\"theta\":" + fmt17(theta) + ",\"directions\":[";
    for (size_t i = 0; i < segment_directions.size(); ++i) {
        const auto& d = segment_directions[i];
        if (i) out += ",";
        out += "[" + fmt17(d.x) + "," + fmt17(d.y) + "," + fmt17(d.z) + "]";
    }
    out += "]}";
    return out;
}

PolyLine build_polyline(const CornerData& corners, bool planar_required) {
    PolyLine poly;
    poly.corners = corners;

    const int K = static_cast<int>(corners.entries.size());
    if (K == 0) {
        poly.theta = kPi;
        poly.segment_directions.assign(1, UnitVec3{1, 0, 0});
        return poly;
    }

    // Interior angles from the amplitude moduli.
    std::vector<double> thetas(K);
    bool equal_real = true;
    for (int k = 0; k < K; ++k) {
        const cplx a = corners.entries[k].alpha;
        if (std::abs(a.imag()) > 0.0 || std::abs(std::abs(a) - std::abs(corners.entries[0].alpha)) > 1e-14)
            equal_real = false;
        thetas[k] = angle_from_alpha(std::abs(a));
    }
    if (!equal_real) {
        if (planar_required)
            throw std::invalid_argument(
                "build_polyline: planar construction requires equal real amplitudes");
        poly.warning = "non-planar corner data embedded with planar equal-turn convention";
    }
    poly.theta = thetas[0];
    poly.planar = true;

    // Segment containing x = 0 points along +x; ties at a corner go right.
    int seg0 = 0;
    for (int k = 0; k < K; ++k)
        if (corners.entries[k].position <= 0) seg0 = k + 1;

    // Same-sign exterior turns (rotation about +z) at every corner.
    std::vector<UnitVec3> dirs(K + 1);
    dirs[seg0] = UnitVec3{1, 0, 0};
    auto rot_z = [](const Vec3& v, double ang) {
        const double c = std::cos(ang), s = std::sin(ang);
        return Vec3{c * v.x - s * v.y, s * v.x + c * v.y, v.z};
    };
    for (int k = seg0; k < K; ++k) dirs[k + 1] = UnitVec3(rot_z(dirs[k], kPi - thetas[k]));
    for (int k = seg0 - 1; k >= 0; --k) dirs[k] = UnitVec3(rot_z(dirs[k + 1], -(kPi - thetas[k])));
    poly.segment_directions = dirs;

    poly.vertices.resize(K);
    for (int k = 0; k < K; ++k) poly.vertices[k] = poly.point_at(corners.entries[k].position);
    return poly;
}

GrowthVector growth_vector_V(const PolyLine& poly) {
    if (poly.corners.entries.size() != 2)
        throw std::invalid_argument("growth_vector_V: exactly two corners required");
    GrowthVector g;
    const double theta = poly.theta;
    const double coeff = (-2.0 / kPi) * std::log(std::sin(0.5 * theta));  // = |alpha|^2
    const Vec3 sum = Vec3(poly.segment_directions[0]) - 2.0 * Vec3(poly.segment_directions[1]) +
                     Vec3(poly.segment_directions[2]);
    g.direction_sum = sum;
    g.value = CVec3(sum) * cplx(0.0, coeff);
    g.magnitude = norm(g.value);
    if (!(coeff > 0.0) || g.magnitude < 1e-15) {
        g.degenerate = true;
        g.value = CVec3{};
        g.magnitude = 0.0;
    }
    return g;
}

GrowthVector growth_vector_Vm(const PolyLine& poly, int m) {
    const int K = static_cast<int>(poly.corners.entries.size());
    if (K == 0 || K % 2 != 0)
        throw std::invalid_argument("growth_vector_Vm: 2N corners required");
    const int N = K / 2;
    if (m < 1 || m > N) throw std::invalid_argument("growth_vector_Vm: m must lie in 1..N");
    for (int k = 0; k < K; ++k)
        if (poly.corners.entries[k].position != -2 * N + 1 + 2 * k)
            throw std::invalid_argument("growth_vector_Vm: corners must sit at the odd integers");

    GrowthVector g;
    const double coeff = (-2.0 / kPi) * std::log(std::sin(0.5 * poly.theta));
    const Vec3 sum = Vec3(poly.tangent_left(-2 * N + 1)) - Vec3(poly.tangent_left(-2 * N + 1 + 2 * m)) -
                     Vec3(poly.tangent_right(2 * N - 1 - 2 * m)) + Vec3(poly.tangent_right(2 * N - 1));
    g.direction_sum = sum;
    g.value = CVec3(sum) * cplx(0.0, coeff);
    g.magnitude = norm(g.value);
    if (!(coeff > 0.0) || g.magnitude < 1e-15) {
        g.degenerate = true;
        g.value = CVec3{};
        g.magnitude = 0.0;
    }
    return g;
}

CurvatureTorsion curvature_torsion_from_u(cplx u, double theta_x) {
    CurvatureTorsion ct;
    ct.curvature = std::abs(u);
    ct.torsion = (ct.curvature > 0.0) ? theta_x : std::numeric_limits<double>::quiet_NaN();
    return ct;
}

}  // namespace filament::geometry

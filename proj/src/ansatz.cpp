#include "filament/ansatz.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace filament::ansatz {

AnsatzField::AnsatzField(geometry::CornerData corners) : corners_(std::move(corners)) {
    M_ = corners_.mass;
}

void AnsatzField::require_positive_time(double t) const {
    if (!(t > 0.0)) throw std::domain_error("AnsatzField: time must be positive");
}

cplx AnsatzField::amplitude(int index, double t) const {
    require_positive_time(t);
    const auto& c = corners_.entries.at(index);
    const double a2 = std::norm(c.alpha);
    // log sqrt(t) = 0.5 log t, t > 0
    const double phase = -(a2 - M_) * 0.5 * std::log(t);
    return std::polar(1.0, phase) * c.alpha;
}

cplx AnsatzField::eval_u(double t, double x) const {
    require_positive_time(t);
    const double inv_sqrt_t = 1.0 / std::sqrt(t);
    cplx sum{0.0, 0.0};
    for (size_t j = 0; j < corners_.entries.size(); ++j) {
        const double d = x - corners_.entries[j].position;
        sum += amplitude(static_cast<int>(j), t) * std::polar(1.0, d * d / (4.0 * t));
    }
    return sum * inv_sqrt_t;
}

cplx AnsatzField::eval_ux(double t, double x) const {
    require_positive_time(t);
    const double inv_sqrt_t = 1.0 / std::sqrt(t);
    cplx sum{0.0, 0.0};
    for (size_t j = 0; j < corners_.entries.size(); ++j) {
        const double d = x - corners_.entries[j].position;
        sum += amplitude(static_cast<int>(j), t) * std::polar(1.0, d * d / (4.0 * t)) *
               cplx(0.0, d / (2.0 * t));
    }
    return sum * inv_sqrt_t;
}

cplx AnsatzField::eval_v(double tau, double x) const {
    if (!(tau > 0.0)) throw std::domain_error("AnsatzField::eval_v: tau must be positive");
    const double t = 1.0 / (4.0 * tau);
    cplx sum{0.0, 0.0};
    for (size_t j = 0; j < corners_.entries.size(); ++j) {
        const double p = corners_.entries[j].position;
        sum += std::conj(amplitude(static_cast<int>(j), t)) *
               std::polar(1.0, -tau * p * p + p * x);
    }
    return sum;
}

double AnsatzField::mass(double t) const {
    double m = 0.0;
    for (size_t j = 0; j < corners_.entries.size(); ++j) m += std::norm(amplitude(static_cast<int>(j), t));
    return m;
}

cplx AnsatzField::nls_residual(double t, double x) const {
    require_positive_time(t);
    // Per-term identities collapse i u_t + u_xx to sum_j |a_j|^2 T_j / (2t) - M u / (2t)
    // minus the |u|^2 gauge part; assemble from the analytic derivatives directly.
    const double inv_sqrt_t = 1.0 / std::sqrt(t);
    cplx u{0.0, 0.0}, ut{0.0, 0.0}, uxx{0.0, 0.0};
    for (size_t j = 0; j < corners_.entries.size(); ++j) {
        const auto& c = corners_.entries[j];
        const double d = x - c.position;
        const double a2 = std::norm(c.alpha);
        const cplx term = amplitude(static_cast<int>(j), t) * std::polar(1.0, d * d / (4.0 * t)) * inv_sqrt_t;
        u += term;
        // d/dt of (phase(t) * e^{i d^2/4t} / sqrt t)
        ut += term * (cplx(0.0, -(a2 - M_) / (2.0 * t)) + cplx(0.0, -d * d / (4.0 * t * t)) - 0.5 / t);
        // d2/dx2
        uxx += term * (cplx(0.0, 1.0 / (2.0 * t)) - d * d / (4.0 * t * t));
    }
    return cplx(0.0, 1.0) * ut + uxx + 0.5 * (std::norm(u) - M_ / t) * u;
}

std::string AnsatzField::batch_csv(double t, const std::vector<double>& xs) const {
    require_positive_time(t);
    std::string out = "x,re_u,im_u,re_ux,im_ux\n";
    char line[200];
    for (double x : xs) {
        const cplx u = eval_u(t, x), w = eval_ux(t, x);
        std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%.17g,%.17g\n", x, u.real(), u.imag(),
                      w.real(), w.imag());
        out += line;
    }
    return out;
}

}  // namespace filament::ansatz

// Leading-order closed forms: the multi-corner solution
//   u(t,x) = sum_j A_j(t) e^{i (x-j)^2 / 4t} / sqrt(t),
//   A_j(t) = e^{-i (|a_j|^2 - M) log sqrt(t)} a_j    (corrections dropped),
// its x-derivative, the 2pi-periodic companion v, mass, and the equation
// residual i u_t + u_xx + (|u|^2 - M/t) u / 2 as an honesty diagnostic.
#pragma once

#include <string>
#include <vector>

#include "filament/geometry.hpp"
#include "filament/vec3.hpp"

namespace filament::ansatz {

class AnsatzField {
  public:
    explicit AnsatzField(geometry::CornerData corners);

    const geometry::CornerData& corners() const { return corners_; }
    double mass_constant() const { return M_; }

    // A_j(t); |amplitude| = |alpha_j| for all t > 0.
    cplx amplitude(int index, double t) const;

    cplx eval_u(double t, double x) const;
    cplx eval_ux(double t, double x) const;

    // Periodic companion with integer frequencies:
    //   v(tau, x) = sum_j conj(A_j(1/(4 tau))) e^{-i tau j^2 + i j x}.
    // Pseudo-conformal identity (exact):
    //   u(t,x) = e^{i x^2/4t}/sqrt(t) * conj(v(1/(4t), x/(2t))).
    cplx eval_v(double tau, double x) const;

    // sum_j |A_j(t)|^2; constant and equal to corners().mass.
    double mass(double t) const;

    // i u_t + u_xx + (|u|^2 - M/t) u / 2, all derivatives analytic.
    cplx nls_residual(double t, double x) const;

    // CSV "x,re_u,im_u,re_ux,im_ux" for a batch of x at fixed t.
    std::string batch_csv(double t, const std::vector<double>& xs) const;

  private:
    void require_positive_time(double t) const;

    geometry::CornerData corners_;
    double M_ = 0.0;
};

}  // namespace filament::ansatz

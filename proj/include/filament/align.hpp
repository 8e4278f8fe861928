// Rigid alignment of direction sets (Kabsch/Horn): used to compare frame
// fields that live in different global orientations, since the flow is
// rotation invariant.
#pragma once

#include <array>
#include <vector>

#include "filament/vec3.hpp"

namespace filament {

using Mat3 = std::array<std::array<double, 3>, 3>;

Vec3 apply(const Mat3& R, const Vec3& v);
Mat3 mat_mul(const Mat3& A, const Mat3& B);
Mat3 identity3();

// Best-fit rotation R minimizing sum_i w_i |R a_i - b_i|^2 (Horn's quaternion
// method; the 4x4 symmetric eigenproblem is solved by cyclic Jacobi).
Mat3 kabsch_rotation(const std::vector<Vec3>& a, const std::vector<Vec3>& b,
                     const std::vector<double>& weights = {});

// Residual max_i angle(R a_i, b_i) in radians.
double alignment_residual(const Mat3& R, const std::vector<Vec3>& a,
                          const std::vector<Vec3>& b);

}  // namespace filament

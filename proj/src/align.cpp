#include "filament/align.hpp"

#include <cmath>
#include <stdexcept>

namespace filament {

Vec3 apply(const Mat3& R, const Vec3& v) {
    return {R[0][0] * v.x + R[0][1] * v.y + R[0][2] * v.z,
            R[1][0] * v.x + R[1][1] * v.y + R[1][2] * v.z,
            R[2][0] * v.x + R[2][1] * v.y + R[2][2] * v.z};
}

Mat3 mat_mul(const Mat3& A, const Mat3& B) {
    Mat3 C{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += A[i][k] * B[k][j];
            C[i][j] = s;
        }
    return C;
}

Mat3 identity3() {
    Mat3 I{};
    I[0][0] = I[1][1] = I[2][2] = 1.0;
    return I;
}

namespace {

// Cyclic Jacobi for a symmetric 4x4; returns eigenvector of the largest
// eigenvalue. Plenty for Horn's matrix.
std::array<double, 4> max_eigvec4(std::array<std::array<double, 4>, 4> A) {
    std::array<std::array<double, 4>, 4> V{};
    for (int i = 0; i < 4; ++i) V[i][i] = 1.0;
    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < 4; ++p)
            for (int q = p + 1; q < 4; ++q) off += A[p][q] * A[p][q];
        if (off < 1e-30) break;
        for (int p = 0; p < 4; ++p)
            for (int q = p + 1; q < 4; ++q) {
                if (std::abs(A[p][q]) < 1e-300) continue;
                const double theta = (A[q][q] - A[p][p]) / (2.0 * A[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < 4; ++k) {
                    const double akp = A[k][p], akq = A[k][q];
                    A[k][p] = c * akp - s * akq;
                    A[k][q] = s * akp + c * akq;
                }
                for (int k = 0; k < 4; ++k) {
                    const double apk = A[p][k], aqk = A[q][k];
                    A[p][k] = c * apk - s * aqk;
                    A[q][k] = s * apk + c * aqk;
                }
                for (int k = 0; k < 4; ++k) {
                    const double vkp = V[k][p], vkq = V[k][q];
                    V[k][p] = c * vkp - s * vkq;
                    V[k][q] = s * vkp + c * vkq;
                }
            }
    }
    int best = 0;
    for (int i = 1; i < 4; ++i)
        if (A[i][i] > A[best][best]) best = i;
    return {V[0][best], V[1][best], V[2][best], V[3][best]};
}

Mat3 quat_to_mat(const std::array<double, 4>& q) {
    const double w = q[0], x = q[1], y = q[2], z = q[3];
    Mat3 R{};
    R[0][0] = 1 - 2 * (y * y + z * z);
    R[0][1] = 2 * (x * y - w * z);
    R[0][2] = 2 * (x * z + w * y);
    R[1][0] = 2 * (x * y + w * z);
    R[1][1] = 1 - 2 * (x * x + z * z);
    R[1][2] = 2 * (y * z - w * x);
    R[2][0] = 2 * (x * z - w * y);
    R[2][1] = 2 * (y * z + w * x);
    R[2][2] = 1 - 2 * (x * x + y * y);
    return R;
}

}  // namespace

Mat3 kabsch_rotation(const std::vector<Vec3>& a, const std::vector<Vec3>& b,
                     const std::vector<double>& weights) {
    if (a.size() != b.size() || a.empty())
        throw std::invalid_argument("kabsch_rotation: size mismatch or empty input");
    if (!weights.empty() && weights.size() != a.size())
        throw std::invalid_argument("kabsch_rotation: weight count mismatch");

    // Covariance S = sum w a_i b_i^T
    double S[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
    for (size_t i = 0; i < a.size(); ++i) {
        const double w = weights.empty() ? 1.0 : weights[i];
        const double av[3] = {a[i].x, a[i].y, a[i].z};
        const double bv[3] = {b[i].x, b[i].y, b[i].z};
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) S[r][c] += w * av[r] * bv[c];
    }

    // Horn's symmetric 4x4 built from S; its top eigenvector is the optimal
    // quaternion rotating a onto b.
    std::array<std::array<double, 4>, 4> K{};
    K[0][0] = S[0][0] + S[1][1] + S[2][2];
    K[0][1] = K[1][0] = S[1][2] - S[2][1];
    K[0][2] = K[2][0] = S[2][0] - S[0][2];
    K[0][3] = K[3][0] = S[0][1] - S[1][0];
    K[1][1] = S[0][0] - S[1][1] - S[2][2];
    K[1][2] = K[2][1] = S[0][1] + S[1][0];
    K[1][3] = K[3][1] = S[2][0] + S[0][2];
    K[2][2] = -S[0][0] + S[1][1] - S[2][2];
    K[2][3] = K[3][2] = S[1][2] + S[2][1];
    K[3][3] = -S[0][0] - S[1][1] + S[2][2];

    return quat_to_mat(max_eigvec4(K));
}

double alignment_residual(const Mat3& R, const std::vector<Vec3>& a,
                          const std::vector<Vec3>& b) {
    double worst = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        const Vec3 ra = apply(R, a[i]);
        const double c = dot(normalized(ra), normalized(b[i]));
        worst = std::max(worst, std::acos(std::clamp(c, -1.0, 1.0)));
    }
    return worst;
}

}  // namespace filament

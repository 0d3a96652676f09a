#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tgemb/embedding.hpp"
#include "tgemb/matrix.hpp"

namespace tgemb {

// m = u * diag(sigma) * v^T with sigma descending; u, v orthogonal even when
// m is rank deficient.
struct SvdResult {
    Mat u, v;
    std::vector<double> sigma;
};

// One-sided Jacobi on a square matrix. Cheap at embedding dimensions and
// dependency free; tolerance 1e-12, at most 100 sweeps.
SvdResult jacobi_svd(const Mat& m);

struct RotationMatrix {
    Mat values;
    std::uint32_t timestep = 0;
};

// Closed-form Orthogonal Procrustes: restrict both matrices to their shared
// nodes, then R = U V^T from the SVD of Q_prev_shared * Q_next_shared^T; R
// minimizes ||R Q_next - Q_prev||_F over orthogonal R. force_proper flips the
// smallest singular direction when det(R) = -1, trading optimality for a
// proper rotation. Errors when no node is shared; warns when fewer than d.
RotationMatrix procrustes_align(const EmbeddingMatrix& q_next, const EmbeddingMatrix& q_prev,
                                bool force_proper = false);

void apply_rotation(const Mat& r, EmbeddingMatrix& q);

// output[0] = input[0]; each later matrix is aligned to the previously
// aligned one and the rotation is applied to all of its columns, new nodes
// included. rotations (optional) receives R_2..R_T.
std::vector<EmbeddingMatrix> align_series(const std::vector<EmbeddingMatrix>& mats,
                                          bool force_proper = false,
                                          std::vector<RotationMatrix>* rotations = nullptr);

// ||R^T R - I||_F
double orthogonality_residual(const Mat& r);

// Gradient refinement of ||R A - B||_F^2 + lambda ||R^T R - I||_F^2 starting
// from an initial R. Off the orthogonal manifold this penalized objective and
// the closed form disagree; the closed form stays the default path.
Mat refine_rotation(const Mat& r0, const Mat& a, const Mat& b, double lambda,
                    std::uint32_t iterations, double step);

void write_rotation_tsv(const std::string& path, const RotationMatrix& r);

}  // namespace tgemb

#include "tgemb/alignment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <stdexcept>

namespace tgemb {

namespace {

// Sign of det via Gaussian elimination with partial pivoting.
double det_sign(Mat m) {
    const std::size_t n = m.rows;
    double sign = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(m(i, k)) > std::abs(m(piv, k))) piv = i;
        if (m(piv, k) == 0.0) return 0.0;
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(piv, j));
            sign = -sign;
        }
        if (m(k, k) < 0.0) sign = -sign;
        for (std::size_t i = k + 1; i < n; ++i) {
            double f = m(i, k) / m(k, k);
            for (std::size_t j = k; j < n; ++j) m(i, j) -= f * m(k, j);
        }
    }
    return sign;
}

}  // namespace

SvdResult jacobi_svd(const Mat& m) {
    if (m.rows != m.cols) throw std::invalid_argument("jacobi_svd: matrix must be square");
    const std::size_t n = m.rows;
    constexpr double kTol = 1e-12;
    constexpr int kMaxSweeps = 100;

    Mat b = m;
    Mat v = Mat::identity(n);
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t i = 0; i + 1 < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                double alpha = 0.0, beta = 0.0, gamma = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    double bi = b(k, i), bj = b(k, j);
                    alpha += bi * bi;
                    beta += bj * bj;
                    gamma += bi * bj;
                }
                if (gamma == 0.0 || std::abs(gamma) <= kTol * std::sqrt(alpha * beta)) continue;
                rotated = true;
                double zeta = (beta - alpha) / (2.0 * gamma);
                double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                           (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                double cs = 1.0 / std::sqrt(1.0 + t * t);
                double sn = cs * t;
                for (std::size_t k = 0; k < n; ++k) {
                    double bi = b(k, i), bj = b(k, j);
                    b(k, i) = cs * bi - sn * bj;
                    b(k, j) = sn * bi + cs * bj;
                    double vi = v(k, i), vj = v(k, j);
                    v(k, i) = cs * vi - sn * vj;
                    v(k, j) = sn * vi + cs * vj;
                }
            }
        if (!rotated) break;
    }

    SvdResult res;
    res.sigma.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k) s += b(k, j) * b(k, j);
        res.sigma[j] = std::sqrt(s);
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return res.sigma[x] > res.sigma[y]; });

    Mat u(n, n);
    Mat vs(n, n);
    std::vector<double> sigma(n);
    double sigma_max = res.sigma.empty() ? 0.0 : res.sigma[order[0]];
    double cutoff = sigma_max * 1e-13;
    std::vector<std::size_t> deficient;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t src = order[c];
        sigma[c] = res.sigma[src];
        for (std::size_t k = 0; k < n; ++k) vs(k, c) = v(k, src);
        if (sigma[c] > cutoff && sigma[c] > 0.0) {
            for (std::size_t k = 0; k < n; ++k) u(k, c) = b(k, src) / sigma[c];
        } else {
            deficient.push_back(c);
        }
    }
    // Rank-deficient input: complete U to an orthonormal basis so U V^T stays
    // orthogonal. Pick, per missing column, the canonical basis vector with
    // the largest residual after projecting out the columns fixed so far.
    for (std::size_t c : deficient) {
        std::vector<double> best(n, 0.0);
        double best_norm = -1.0;
        for (std::size_t e = 0; e < n; ++e) {
            std::vector<double> w(n, 0.0);
            w[e] = 1.0;
            for (std::size_t c2 = 0; c2 < n; ++c2) {
                if (c2 == c || (std::find(deficient.begin(), deficient.end(), c2) !=
                                    deficient.end() &&
                                c2 > c))
                    continue;
                double dot = 0.0;
                for (std::size_t k = 0; k < n; ++k) dot += u(k, c2) * w[k];
                for (std::size_t k = 0; k < n; ++k) w[k] -= dot * u(k, c2);
            }
            double norm = 0.0;
            for (double x : w) norm += x * x;
            if (norm > best_norm) {
                best_norm = norm;
                best = std::move(w);
            }
        }
        double inv = 1.0 / std::sqrt(best_norm);
        for (std::size_t k = 0; k < n; ++k) u(k, c) = best[k] * inv;
    }

    res.u = std::move(u);
    res.v = std::move(vs);
    res.sigma = std::move(sigma);
    return res;
}

RotationMatrix procrustes_align(const EmbeddingMatrix& q_next, const EmbeddingMatrix& q_prev,
                                bool force_proper) {
    if (q_next.dim != q_prev.dim)
        throw std::invalid_argument("procrustes_align: dimension mismatch");
    const std::uint32_t d = q_next.dim;

    std::vector<std::uint32_t> shared;
    std::set_intersection(q_prev.nodes.begin(), q_prev.nodes.end(), q_next.nodes.begin(),
                          q_next.nodes.end(), std::back_inserter(shared));
    if (shared.empty())
        throw std::runtime_error("procrustes_align: the two embeddings share no nodes");
    if (shared.size() < d)
        std::cerr << "procrustes_align: only " << shared.size() << " shared nodes for dimension "
                  << d << "; rotation is underdetermined\n";

    Mat m(d, d);
    for (std::uint32_t node : shared) {
        const double* a = q_prev.col(static_cast<std::uint32_t>(q_prev.col_of(node)));
        const double* b = q_next.col(static_cast<std::uint32_t>(q_next.col_of(node)));
        for (std::uint32_t i = 0; i < d; ++i) {
            double ai = a[i];
            if (ai == 0.0) continue;
            double* mr = m.row(i);
            for (std::uint32_t j = 0; j < d; ++j) mr[j] += ai * b[j];
        }
    }

    SvdResult svd = jacobi_svd(m);
    Mat r = matmul_bt(svd.u, svd.v);
    if (force_proper && det_sign(r) < 0.0) {
        const std::size_t last = d - 1;  // smallest singular direction
        for (std::uint32_t k = 0; k < d; ++k) svd.u(k, last) = -svd.u(k, last);
        r = matmul_bt(svd.u, svd.v);
    }
    return RotationMatrix{std::move(r), q_next.timestep};
}

void apply_rotation(const Mat& r, EmbeddingMatrix& q) {
    if (r.rows != q.dim || r.cols != q.dim)
        throw std::invalid_argument("apply_rotation: dimension mismatch");
    std::vector<double> tmp(q.dim);
    for (std::uint32_t c = 0; c < q.cols(); ++c) {
        double* col = q.col(c);
        std::fill(tmp.begin(), tmp.end(), 0.0);
        gemv_acc(r, col, tmp.data());
        std::copy(tmp.begin(), tmp.end(), col);
    }
}

std::vector<EmbeddingMatrix> align_series(const std::vector<EmbeddingMatrix>& mats,
                                          bool force_proper,
                                          std::vector<RotationMatrix>* rotations) {
    if (mats.empty()) throw std::invalid_argument("align_series: no matrices");
    std::vector<EmbeddingMatrix> out;
    out.reserve(mats.size());
    out.push_back(mats.front());
    if (rotations) rotations->clear();
    for (std::size_t k = 1; k < mats.size(); ++k) {
        RotationMatrix r = procrustes_align(mats[k], out.back(), force_proper);
        out.push_back(mats[k]);
        apply_rotation(r.values, out.back());
        if (rotations) rotations->push_back(std::move(r));
    }
    return out;
}

double orthogonality_residual(const Mat& r) {
    Mat g = matmul(transpose(r), r);
    for (std::size_t i = 0; i < g.rows; ++i) g(i, i) -= 1.0;
    return frobenius_norm(g);
}

Mat refine_rotation(const Mat& r0, const Mat& a, const Mat& b, double lambda,
                    std::uint32_t iterations, double step) {
    Mat r = r0;
    for (std::uint32_t it = 0; it < iterations; ++it) {
        Mat resid = matmul(r, a);
        for (std::size_t i = 0; i < resid.a.size(); ++i) resid.a[i] -= b.a[i];
        Mat grad = matmul_bt(resid, a);  // (RA - B) A^T
        Mat s = matmul(transpose(r), r);
        for (std::size_t i = 0; i < s.rows; ++i) s(i, i) -= 1.0;
        Mat pen = matmul(r, s);
        for (std::size_t i = 0; i < grad.a.size(); ++i)
            r.a[i] -= step * (2.0 * grad.a[i] + 4.0 * lambda * pen.a[i]);
    }
    return r;
}

void write_rotation_tsv(const std::string& path, const RotationMatrix& r) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write rotation: " + path);
    char buf[64];
    for (std::size_t i = 0; i < r.values.rows; ++i) {
        for (std::size_t j = 0; j < r.values.cols; ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", r.values(i, j));
            out << (j ? "\t" : "") << buf;
        }
        out << '\n';
    }
}

}  // namespace tgemb

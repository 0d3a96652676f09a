#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <vector>

namespace tgemb {

// Dense row-major matrix of doubles. Sized for the d-by-d / d-by-|V| blocks
// this library works with; no view machinery, just storage plus the handful
// of products the algorithms need.
struct Mat {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> a;

    Mat() = default;
    Mat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}

    double& operator()(std::size_t i, std::size_t j) {
        assert(i < rows && j < cols);
        return a[i * cols + j];
    }
    double operator()(std::size_t i, std::size_t j) const {
        assert(i < rows && j < cols);
        return a[i * cols + j];
    }

    double* row(std::size_t i) { return a.data() + i * cols; }
    const double* row(std::size_t i) const { return a.data() + i * cols; }

    void fill(double v) { a.assign(a.size(), v); }

    static Mat identity(std::size_t n) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    bool all_finite() const {
        for (double v : a)
            if (!std::isfinite(v)) return false;
        return true;
    }
};

inline Mat matmul(const Mat& x, const Mat& y) {
    assert(x.cols == y.rows);
    Mat out(x.rows, y.cols);
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t k = 0; k < x.cols; ++k) {
            double xv = x(i, k);
            if (xv == 0.0) continue;
            const double* yr = y.row(k);
            double* outr = out.row(i);
            for (std::size_t j = 0; j < y.cols; ++j) outr[j] += xv * yr[j];
        }
    return out;
}

// x * y^T
inline Mat matmul_bt(const Mat& x, const Mat& y) {
    assert(x.cols == y.cols);
    Mat out(x.rows, y.rows);
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t j = 0; j < y.rows; ++j) {
            const double* xr = x.row(i);
            const double* yr = y.row(j);
            double s = 0.0;
            for (std::size_t k = 0; k < x.cols; ++k) s += xr[k] * yr[k];
            out(i, j) = s;
        }
    return out;
}

inline Mat transpose(const Mat& x) {
    Mat out(x.cols, x.rows);
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t j = 0; j < x.cols; ++j) out(j, i) = x(i, j);
    return out;
}

inline double frobenius_norm(const Mat& x) {
    double s = 0.0;
    for (double v : x.a) s += v * v;
    return std::sqrt(s);
}

inline double frobenius_distance(const Mat& x, const Mat& y) {
    assert(x.rows == y.rows && x.cols == y.cols);
    double s = 0.0;
    for (std::size_t i = 0; i < x.a.size(); ++i) {
        double d = x.a[i] - y.a[i];
        s += d * d;
    }
    return std::sqrt(s);
}

// y += m * x for vectors given as raw pointers (lengths from m).
inline void gemv_acc(const Mat& m, const double* x, double* y) {
    for (std::size_t i = 0; i < m.rows; ++i) {
        const double* r = m.row(i);
        double s = 0.0;
        for (std::size_t j = 0; j < m.cols; ++j) s += r[j] * x[j];
        y[i] += s;
    }
}

// y += m^T * x
inline void gemv_t_acc(const Mat& m, const double* x, double* y) {
    for (std::size_t i = 0; i < m.rows; ++i) {
        double xi = x[i];
        if (xi == 0.0) continue;
        const double* r = m.row(i);
        for (std::size_t j = 0; j < m.cols; ++j) y[j] += r[j] * xi;
    }
}

}  // namespace tgemb

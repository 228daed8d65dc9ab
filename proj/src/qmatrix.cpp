#include "qface/qmatrix.hpp"

#include <cmath>
#include <stdexcept>

#include "qface/errors.hpp"
#include "qface/threads.hpp"

namespace qface {

QMatrix QMatrix::identity(int n) {
    QMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.set(i, i, Quaternion::real(1.0));
    return m;
}

namespace {

void require_same_shape(const QMatrix& a, const QMatrix& b, const char* op) {
    if (!a.same_shape(b))
        throw std::invalid_argument(std::string(op) + ": shape mismatch");
}

}  // namespace

QMatrix add(const QMatrix& a, const QMatrix& b) {
    require_same_shape(a, b, "add");
    QMatrix r(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.size(); ++i) {
        r.plane_w()[i] = a.plane_w()[i] + b.plane_w()[i];
        r.plane_x()[i] = a.plane_x()[i] + b.plane_x()[i];
        r.plane_y()[i] = a.plane_y()[i] + b.plane_y()[i];
        r.plane_z()[i] = a.plane_z()[i] + b.plane_z()[i];
    }
    return r;
}

QMatrix sub(const QMatrix& a, const QMatrix& b) {
    require_same_shape(a, b, "sub");
    QMatrix r(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.size(); ++i) {
        r.plane_w()[i] = a.plane_w()[i] - b.plane_w()[i];
        r.plane_x()[i] = a.plane_x()[i] - b.plane_x()[i];
        r.plane_y()[i] = a.plane_y()[i] - b.plane_y()[i];
        r.plane_z()[i] = a.plane_z()[i] - b.plane_z()[i];
    }
    return r;
}

QMatrix scale(const QMatrix& a, double s) {
    QMatrix r(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.size(); ++i) {
        r.plane_w()[i] = a.plane_w()[i] * s;
        r.plane_x()[i] = a.plane_x()[i] * s;
        r.plane_y()[i] = a.plane_y()[i] * s;
        r.plane_z()[i] = a.plane_z()[i] * s;
    }
    return r;
}

QMatrix scale_right(const QMatrix& a, const Quaternion& q) {
    QMatrix r(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) r.set(i, j, a(i, j) * q);
    return r;
}

QMatrix conj_transpose(const QMatrix& a) {
    QMatrix r(a.cols(), a.rows());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) r.set(j, i, a(i, j).conj());
    return r;
}

namespace {

// One output row of C = A * B; accumulation over k runs in index order.
void matmul_row(const QMatrix& a, const QMatrix& b, QMatrix& c, int i) {
    const int n = b.cols();
    const int kk = a.cols();
    for (int j = 0; j < n; ++j) {
        Quaternion acc;
        for (int k = 0; k < kk; ++k) acc += a(i, k) * b(k, j);
        c.set(i, j, acc);
    }
}

}  // namespace

QMatrix matmul_serial(const QMatrix& a, const QMatrix& b) {
    if (a.cols() != b.rows())
        throw std::invalid_argument("matmul: inner dimension mismatch");
    QMatrix c(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i) matmul_row(a, b, c, i);
    return c;
}

QMatrix matmul(const QMatrix& a, const QMatrix& b) {
    if (a.cols() != b.rows())
        throw std::invalid_argument("matmul: inner dimension mismatch");
    QMatrix c(a.rows(), b.cols());
    const int m = a.rows();
#pragma omp parallel for schedule(static) num_threads(thread_count())
    for (int i = 0; i < m; ++i) matmul_row(a, b, c, i);
    return c;
}

double fro_norm_sq(const QMatrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += a.plane_w()[i] * a.plane_w()[i];
        s += a.plane_x()[i] * a.plane_x()[i];
        s += a.plane_y()[i] * a.plane_y()[i];
        s += a.plane_z()[i] * a.plane_z()[i];
    }
    return s;
}

double fro_norm(const QMatrix& a) { return std::sqrt(fro_norm_sq(a)); }

namespace {

// Entry (p, q) of sum_s w_s * A_s^* A_s. Samples outer, rows inner.
Quaternion gram_entry(std::span<const QMatrix> devs, std::span<const double> weights,
                      int p, int q) {
    Quaternion acc;
    for (std::size_t s = 0; s < devs.size(); ++s) {
        const QMatrix& d = devs[s];
        Quaternion cell;
        for (int r = 0; r < d.rows(); ++r) cell += d(r, p).conj() * d(r, q);
        acc += cell * weights[s];
    }
    return acc;
}

void gram_check(std::span<const QMatrix> devs, std::span<const double> weights) {
    if (devs.size() != weights.size())
        throw std::invalid_argument("gram_accumulate: weight count mismatch");
    for (const QMatrix& d : devs)
        if (!d.same_shape(devs.front()))
            throw std::invalid_argument("gram_accumulate: sample shape mismatch");
}

}  // namespace

QMatrix gram_accumulate_serial(std::span<const QMatrix> devs,
                               std::span<const double> weights) {
    if (devs.empty()) throw std::invalid_argument("gram_accumulate: empty sample list");
    gram_check(devs, weights);
    const int n = devs.front().cols();
    QMatrix g(n, n);
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) g.set(p, q, gram_entry(devs, weights, p, q));
    return g;
}

QMatrix gram_accumulate(std::span<const QMatrix> devs, std::span<const double> weights) {
    if (devs.empty()) throw std::invalid_argument("gram_accumulate: empty sample list");
    gram_check(devs, weights);
    const int n = devs.front().cols();
    QMatrix g(n, n);
#pragma omp parallel for schedule(static) num_threads(thread_count())
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) g.set(p, q, gram_entry(devs, weights, p, q));
    return g;
}

Quaternion column_dot(const QMatrix& a, int ca, const QMatrix& b, int cb) {
    if (a.rows() != b.rows())
        throw std::invalid_argument("column_dot: row count mismatch");
    Quaternion acc;
    for (int i = 0; i < a.rows(); ++i) acc += a(i, ca).conj() * b(i, cb);
    return acc;
}

void orthogonalize_column(const QMatrix& basis, int count, QMatrix& cand) {
    for (int pass = 0; pass < 2; ++pass) {
        for (int c = 0; c < count; ++c) {
            const Quaternion coef = column_dot(basis, c, cand, 0);
            for (int i = 0; i < basis.rows(); ++i)
                cand.set(i, 0, cand(i, 0) - basis(i, c) * coef);
        }
    }
}

double column_norm(const QMatrix& a, int c) {
    double s = 0.0;
    for (int i = 0; i < a.rows(); ++i) s += a(i, c).norm_sq();
    return std::sqrt(s);
}

QMatrix orthonormalize_columns(const QMatrix& a, double tol) {
    QMatrix v = a;
    const int r = v.cols();
    const int m = v.rows();
    for (int c = 0; c < r; ++c) {
        // Two projection passes keep orthogonality near machine precision.
        for (int pass = 0; pass < 2; ++pass) {
            for (int p = 0; p < c; ++p) {
                Quaternion coef = column_dot(v, p, v, c);
                for (int i = 0; i < m; ++i)
                    v.set(i, c, v(i, c) - v(i, p) * coef);
            }
        }
        double nrm = std::sqrt(column_dot(v, c, v, c).w);
        double ref = std::sqrt(column_dot(a, c, a, c).w);
        if (!(nrm > tol * (ref > 0 ? ref : 1.0)))
            throw NumericalError("orthonormalize_columns: dependent column");
        for (int i = 0; i < m; ++i) v.set(i, c, v(i, c) * (1.0 / nrm));
    }
    return v;
}

}  // namespace qface

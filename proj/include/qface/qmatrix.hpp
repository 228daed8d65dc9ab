#ifndef QFACE_QMATRIX_HPP
#define QFACE_QMATRIX_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "qface/quaternion.hpp"

namespace qface {

/// Dense quaternion matrix stored as four real row-major planes
/// (w, x, y, z components of every entry). Values are immutable by
/// convention once an operation has produced them; all free functions
/// below return fresh matrices.
class QMatrix {
public:
    QMatrix() = default;
    QMatrix(int rows, int cols)
        : rows_(rows), cols_(cols),
          w_(size(), 0.0), x_(size(), 0.0), y_(size(), 0.0), z_(size(), 0.0) {}

    static QMatrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::size_t size() const {
        return static_cast<std::size_t>(rows_) * static_cast<std::size_t>(cols_);
    }
    bool empty() const { return size() == 0; }

    Quaternion operator()(int r, int c) const {
        std::size_t i = idx(r, c);
        return {w_[i], x_[i], y_[i], z_[i]};
    }
    void set(int r, int c, const Quaternion& q) {
        std::size_t i = idx(r, c);
        w_[i] = q.w; x_[i] = q.x; y_[i] = q.y; z_[i] = q.z;
    }

    // Plane access for kernels and serialization. Row-major, rows*cols each.
    std::span<const double> plane_w() const { return w_; }
    std::span<const double> plane_x() const { return x_; }
    std::span<const double> plane_y() const { return y_; }
    std::span<const double> plane_z() const { return z_; }
    std::span<double> plane_w() { return w_; }
    std::span<double> plane_x() { return x_; }
    std::span<double> plane_y() { return y_; }
    std::span<double> plane_z() { return z_; }

    bool same_shape(const QMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_;
    }

    /// Bitwise equality of all four planes.
    bool equals(const QMatrix& o) const {
        return same_shape(o) && w_ == o.w_ && x_ == o.x_ && y_ == o.y_ && z_ == o.z_;
    }

private:
    std::size_t idx(int r, int c) const {
        return static_cast<std::size_t>(r) * cols_ + c;
    }

    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> w_, x_, y_, z_;
};

// Elementwise algebra.
QMatrix add(const QMatrix& a, const QMatrix& b);
QMatrix sub(const QMatrix& a, const QMatrix& b);
QMatrix scale(const QMatrix& a, double s);
/// Right-multiply every entry by a quaternion scalar (used for gauge fixes).
QMatrix scale_right(const QMatrix& a, const Quaternion& q);

/// Conjugate transpose: (A*)_{ab} = conj(A_{ba}).
QMatrix conj_transpose(const QMatrix& a);

/// Hamilton-product matrix multiply, parallel over output rows. Each output
/// entry accumulates over the inner index in a fixed order, so the result is
/// bitwise independent of the thread count.
QMatrix matmul(const QMatrix& a, const QMatrix& b);
/// Single-threaded reference with the identical summation order.
QMatrix matmul_serial(const QMatrix& a, const QMatrix& b);

/// Frobenius norm: sqrt of the sum of squared component magnitudes.
double fro_norm(const QMatrix& a);
double fro_norm_sq(const QMatrix& a);

/// Weighted Gram accumulation: sum_s w_s * A_s^* A_s for same-shaped m-by-n
/// deviation matrices, yielding an n-by-n Hermitian matrix. Parallel over
/// output entries; summation order per entry is fixed (samples outer, rows
/// inner), so results are bitwise independent of the thread count.
QMatrix gram_accumulate(std::span<const QMatrix> devs, std::span<const double> weights);
QMatrix gram_accumulate_serial(std::span<const QMatrix> devs, std::span<const double> weights);

/// Modified Gram-Schmidt on the columns (two passes). Throws NumericalError
/// when a column is dependent on the previous ones beyond `tol` relative.
QMatrix orthonormalize_columns(const QMatrix& a, double tol = 1e-10);

/// Column inner product <a_col, b_col> = sum_i conj(a_i) b_i for n-by-1 use;
/// operates on column `ca` of a and `cb` of b.
Quaternion column_dot(const QMatrix& a, int ca, const QMatrix& b, int cb);

/// Two-pass modified Gram-Schmidt of the single-column matrix `cand`
/// against columns [0, count) of `basis`, in place. The basis columns must
/// be orthonormal.
void orthogonalize_column(const QMatrix& basis, int count, QMatrix& cand);

/// Euclidean norm of column c.
double column_norm(const QMatrix& a, int c = 0);

}  // namespace qface

#endif  // QFACE_QMATRIX_HPP

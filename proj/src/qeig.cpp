#include "qface/qeig.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "qface/adjoint.hpp"
#include "qface/errors.hpp"

namespace qface {

namespace {

// Right-multiply the column by a unit quaternion so its entry of largest
// modulus becomes real and positive. Fixes the right-scalar gauge freedom
// of quaternion eigenvectors.
void gauge_fix(QMatrix& v) {
    int idx = 0;
    double best = -1.0;
    for (int i = 0; i < v.rows(); ++i) {
        const double m = v(i, 0).norm();
        if (m > best) {
            best = m;
            idx = i;
        }
    }
    if (best <= 0.0) {
        return;
    }
    const Quaternion u = v(idx, 0);
    const double m = u.norm();
    const Quaternion mu{u.w / m, -u.x / m, -u.y / m, -u.z / m};
    for (int i = 0; i < v.rows(); ++i) {
        v.set(i, 0, v(i, 0) * mu);
    }
}

}  // namespace

HermitianEigen heig(const QMatrix& g) {
    if (g.rows() != g.cols()) {
        throw std::invalid_argument("heig: matrix must be square");
    }
    const int n = g.rows();
    if (n == 0) {
        return HermitianEigen{{}, QMatrix(0, 0)};
    }

    const double gnorm = fro_norm(g);
    const QMatrix gh = conj_transpose(g);
    if (fro_norm(sub(g, gh)) > 1e-10 * gnorm) {
        throw NumericalError("heig: matrix is not Hermitian");
    }
    const QMatrix sym = scale(add(g, gh), 0.5);

    Eigen::SelfAdjointEigenSolver<ComplexAdjoint> solver(to_adjoint(sym));
    if (solver.info() != Eigen::Success) {
        throw NumericalError("heig: adjoint eigensolver failed");
    }

    // Eigen sorts ascending; reverse for a descending spectrum.
    const int nn = 2 * n;
    std::vector<double> lam(nn);
    for (int i = 0; i < nn; ++i) {
        lam[i] = solver.eigenvalues()(nn - 1 - i);
    }

    // The adjoint spectrum is the quaternion spectrum doubled: entries
    // 2t and 2t+1 must coincide.
    const double pair_tol = 1e-9 * gnorm;
    for (int t = 0; t < n; ++t) {
        if (std::abs(lam[2 * t] - lam[2 * t + 1]) > pair_tol) {
            throw NumericalError("heig: adjoint spectrum failed to pair");
        }
    }

    HermitianEigen out;
    out.eigenvalues.resize(n);
    for (int t = 0; t < n; ++t) {
        out.eigenvalues[t] = lam[2 * t];
    }
    out.eigenvectors = QMatrix(n, n);

    // Recover quaternion eigenvectors cluster by cluster. A cluster of c
    // near-equal eigenvalues owns 2c adjoint eigenvectors whose quaternion
    // images span a c-dimensional right eigenspace; pivoted Gram-Schmidt
    // picks c orthonormal representatives.
    int accepted = 0;
    int t = 0;
    while (t < n) {
        int end = t + 1;
        while (end < n &&
               out.eigenvalues[end - 1] - out.eigenvalues[end] <= pair_tol) {
            ++end;
        }
        const int c = end - t;

        std::vector<QMatrix> pool;
        pool.reserve(2 * c);
        for (int k = 2 * t; k < 2 * end; ++k) {
            pool.push_back(from_adjoint_vector(
                solver.eigenvectors().col(nn - 1 - k)));
        }

        for (int pick = 0; pick < c; ++pick) {
            int best = -1;
            double best_norm = -1.0;
            std::vector<QMatrix> residuals;
            residuals.reserve(pool.size());
            for (std::size_t p = 0; p < pool.size(); ++p) {
                QMatrix r = pool[p];
                orthogonalize_column(out.eigenvectors, accepted, r);
                const double nr = column_norm(r);
                residuals.push_back(std::move(r));
                if (nr > best_norm) {
                    best_norm = nr;
                    best = static_cast<int>(p);
                }
            }
            if (best < 0 || best_norm < 1e-6) {
                throw NumericalError("heig: eigenspace recovery failed");
            }
            QMatrix v = std::move(residuals[static_cast<std::size_t>(best)]);
            const double inv = 1.0 / column_norm(v);
            for (int i = 0; i < n; ++i) {
                v.set(i, 0, v(i, 0) * inv);
            }
            gauge_fix(v);
            for (int i = 0; i < n; ++i) {
                out.eigenvectors.set(i, accepted, v(i, 0));
            }
            ++accepted;
            pool.erase(pool.begin() + best);
        }
        t = end;
    }

    return out;
}

Subspace top_r(const HermitianEigen& e, int r) {
    const int n = e.eigenvectors.cols();
    if (r < 1 || r > n) {
        throw std::invalid_argument("top_r: r must be in [1, n], got " +
                                    std::to_string(r));
    }
    const double lead = e.eigenvalues.empty() ? 0.0 : e.eigenvalues[0];
    if (e.eigenvalues[static_cast<std::size_t>(r - 1)] <= 1e-12 * lead) {
        throw NumericalError("rank deficient: reduce r");
    }

    Subspace s;
    s.basis = QMatrix(n, r);
    s.eigenvalues.assign(e.eigenvalues.begin(), e.eigenvalues.begin() + r);
    for (int c = 0; c < r; ++c) {
        for (int i = 0; i < n; ++i) {
            s.basis.set(i, c, e.eigenvectors(i, c));
        }
    }
    return s;
}

}  // namespace qface

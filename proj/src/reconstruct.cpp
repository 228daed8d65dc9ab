#include "qface/reconstruct.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qface/errors.hpp"

namespace qface {

QMatrix reconstruct(const QMatrix& features, const EigenfaceModel& m) {
    if (features.rows() != m.rows || features.cols() != m.r) {
        throw std::invalid_argument(
            "reconstruct: feature shape does not match model");
    }
    return add(matmul(features, conj_transpose(m.basis)), m.mean);
}

double reconstruction_ratio(const QMatrix& original, const QMatrix& recon) {
    if (!original.same_shape(recon)) {
        throw std::invalid_argument("reconstruction_ratio: shape mismatch");
    }
    const double denom = fro_norm(original);
    if (denom <= 0.0) {
        throw DataError("reconstruction_ratio: zero-norm image");
    }
    return 1.0 - fro_norm(sub(recon, original)) / denom;
}

QMatrix orthonormal_complement(const QMatrix& v) {
    const int n = v.rows();
    const int r = v.cols();
    if (r > n) {
        throw std::invalid_argument("orthonormal_complement: more columns than rows");
    }
    for (int c = 0; c < r; ++c) {
        for (int c2 = c; c2 < r; ++c2) {
            const Quaternion dot = column_dot(v, c, v, c2);
            const Quaternion target = Quaternion::real(c == c2 ? 1.0 : 0.0);
            if ((dot - target).norm() > 1e-10) {
                throw std::invalid_argument(
                    "orthonormal_complement: columns not orthonormal");
            }
        }
    }

    // Accepted basis: V's columns first, then the complement as it grows.
    QMatrix basis(n, n);
    for (int c = 0; c < r; ++c) {
        for (int i = 0; i < n; ++i) {
            basis.set(i, c, v(i, c));
        }
    }
    int accepted = r;

    std::vector<QMatrix> pool;
    pool.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        QMatrix e(n, 1);
        e.set(k, 0, Quaternion::real(1.0));
        pool.push_back(std::move(e));
    }

    while (accepted < n) {
        int best = -1;
        double best_norm = -1.0;
        std::vector<QMatrix> residuals;
        residuals.reserve(pool.size());
        for (std::size_t p = 0; p < pool.size(); ++p) {
            QMatrix cand = pool[p];
            orthogonalize_column(basis, accepted, cand);
            const double nr = column_norm(cand);
            residuals.push_back(std::move(cand));
            if (nr > best_norm) {
                best_norm = nr;
                best = static_cast<int>(p);
            }
        }
        // The canonical basis always spans the complement; a vanishing best
        // residual means V was not orthonormal after all.
        if (best < 0 || best_norm < 1e-10) {
            throw NumericalError("orthonormal_complement: completion failed");
        }
        QMatrix w = std::move(residuals[static_cast<std::size_t>(best)]);
        const double inv = 1.0 / column_norm(w);
        for (int i = 0; i < n; ++i) {
            basis.set(i, accepted, w(i, 0) * inv);
        }
        ++accepted;
        pool.erase(pool.begin() + best);
    }

    QMatrix comp(n, n - r);
    for (int c = r; c < n; ++c) {
        for (int i = 0; i < n; ++i) {
            comp.set(i, c - r, basis(i, c));
        }
    }
    return comp;
}

ReconstructionReport reconstruct_training(const TrainingSet& t,
                                          const EigenfaceModel& m) {
    ReconstructionReport rep;
    rep.r = m.r;
    rep.ratios.reserve(t.samples.size());
    rep.residuals.reserve(t.samples.size());
    for (const auto& s : t.samples) {
        const QMatrix recon = reconstruct(project(s.image, m).p, m);
        rep.residuals.push_back(fro_norm(sub(recon, s.image)));
        rep.ratios.push_back(reconstruction_ratio(s.image, recon));
    }
    return rep;
}

}  // namespace qface

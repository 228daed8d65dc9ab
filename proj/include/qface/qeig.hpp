#ifndef QFACE_QEIG_HPP
#define QFACE_QEIG_HPP

#include <vector>

#include "qface/qmatrix.hpp"

namespace qface {

/// Full spectrum of a Hermitian quaternion matrix. Eigenvalues are real and
/// sorted descending; eigenvector columns are unitary and gauge-fixed so that
/// each column's first entry of largest modulus is real and positive.
struct HermitianEigen {
    std::vector<double> eigenvalues;
    QMatrix eigenvectors;  // n x n, column s pairs with eigenvalues[s]
};

/// Leading r-dimensional eigenface subspace: basis V (n x r, unitary columns)
/// and the positive diagonal D of retained eigenvalues.
struct Subspace {
    QMatrix basis;
    std::vector<double> eigenvalues;
};

/// Eigendecomposition of a Hermitian quaternion matrix via its complex
/// adjoint: the 2n adjoint eigenvalues come in coincident pairs which are
/// deduplicated to the n quaternion eigenvalues, and quaternion eigenvectors
/// are recovered from the adjoint eigenbasis (pivoted re-orthonormalization
/// inside degenerate clusters).
///
/// The input must be square and Hermitian within 1e-10 * ||G||_F; it is
/// symmetrized as (G + G^*)/2 before solving. Throws NumericalError on
/// non-Hermitian input or solver failure, std::invalid_argument on
/// non-square input.
HermitianEigen heig(const QMatrix& g);

/// Top-r truncation. Requires 1 <= r <= n (std::invalid_argument otherwise)
/// and a strictly positive retained spectrum: lambda_r <= 1e-12 * lambda_1
/// throws NumericalError("rank deficient: reduce r").
Subspace top_r(const HermitianEigen& e, int r);

}  // namespace qface

#endif  // QFACE_QEIG_HPP

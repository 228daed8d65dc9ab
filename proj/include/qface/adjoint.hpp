#ifndef QFACE_ADJOINT_HPP
#define QFACE_ADJOINT_HPP

#include <Eigen/Dense>

#include "qface/qmatrix.hpp"

namespace qface {

/// Complex adjoint of an m-by-n quaternion matrix Q = A + B j
/// (A = Q0 + Q1 i, B = Q2 + Q3 i):
///
///   chi(Q) = [ A        B      ]     in C^{2m x 2n}.
///            [ -conj(B) conj(A)]
///
/// chi is an algebra homomorphism (chi(PQ) = chi(P) chi(Q),
/// chi(Q^*) = chi(Q)^H), it maps Hermitian to Hermitian, and the spectrum
/// of chi(Q) is the right spectrum of Q with every multiplicity doubled.
using ComplexAdjoint = Eigen::MatrixXcd;

ComplexAdjoint to_adjoint(const QMatrix& q);

/// Inverse of to_adjoint on its image: reads the A and B blocks back into
/// the four planes. The bottom half is redundant and is ignored.
QMatrix from_adjoint(const ComplexAdjoint& m);

/// Recover an n-vector over the quaternions from a 2n complex vector in
/// chi(Q)'s column convention: [p; q] maps to u = p - conj(q) j, which is
/// the vector whose adjoint's first column is [p; q]. For an eigenpair
/// (lambda, [p; q]) of chi(Q) the result satisfies Q u = u lambda.
QMatrix from_adjoint_vector(const Eigen::VectorXcd& v);

/// Largest singular value, computed on the complex adjoint.
double spectral_norm(const QMatrix& a);

}  // namespace qface

#endif  // QFACE_ADJOINT_HPP

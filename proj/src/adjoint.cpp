#include "qface/adjoint.hpp"

#include <complex>
#include <stdexcept>

namespace qface {

using std::complex;

ComplexAdjoint to_adjoint(const QMatrix& q) {
    const int m = q.rows();
    const int n = q.cols();
    ComplexAdjoint chi(2 * m, 2 * n);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) {
            const Quaternion v = q(i, j);
            const complex<double> a(v.w, v.x);
            const complex<double> b(v.y, v.z);
            chi(i, j) = a;
            chi(i, n + j) = b;
            chi(m + i, j) = -std::conj(b);
            chi(m + i, n + j) = std::conj(a);
        }
    }
    return chi;
}

QMatrix from_adjoint(const ComplexAdjoint& mat) {
    if (mat.rows() % 2 != 0 || mat.cols() % 2 != 0)
        throw std::invalid_argument("from_adjoint: dimensions must be even");
    const int m = static_cast<int>(mat.rows()) / 2;
    const int n = static_cast<int>(mat.cols()) / 2;
    QMatrix q(m, n);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) {
            const complex<double> a = mat(i, j);
            const complex<double> b = mat(i, n + j);
            q.set(i, j, {a.real(), a.imag(), b.real(), b.imag()});
        }
    }
    return q;
}

QMatrix from_adjoint_vector(const Eigen::VectorXcd& v) {
    if (v.size() % 2 != 0)
        throw std::invalid_argument("from_adjoint_vector: length must be even");
    const int n = static_cast<int>(v.size()) / 2;
    QMatrix u(n, 1);
    for (int i = 0; i < n; ++i) {
        const complex<double> p = v(i);
        const complex<double> b = -std::conj(v(n + i));
        u.set(i, 0, {p.real(), p.imag(), b.real(), b.imag()});
    }
    return u;
}

double spectral_norm(const QMatrix& a) {
    if (a.empty()) return 0.0;
    ComplexAdjoint chi = to_adjoint(a);
    Eigen::JacobiSVD<ComplexAdjoint> svd(chi);
    return svd.singularValues()(0);
}

}  // namespace qface

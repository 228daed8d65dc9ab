#ifndef QFACE_RECONSTRUCT_HPP
#define QFACE_RECONSTRUCT_HPP

#include <vector>

#include "qface/model.hpp"
#include "qface/qmatrix.hpp"
#include "qface/recognize.hpp"

namespace qface {

/// R = P V^* + Psi. At full rank this is the original image exactly (up to
/// rounding); channel clamping happens only at image export, never here.
/// Throws std::invalid_argument on a shape mismatch.
QMatrix reconstruct(const QMatrix& features, const EigenfaceModel& m);

/// Ratio = 1 - ||R - F||_F / ||F||_F. Throws DataError on a zero-norm
/// original.
double reconstruction_ratio(const QMatrix& original, const QMatrix& recon);

/// Unitary completion: columns spanning the orthogonal complement of V's
/// column space, built by pivoted modified Gram-Schmidt over the canonical
/// basis. [V, complement] is unitary within 1e-10. Throws
/// std::invalid_argument when V's columns are not orthonormal.
QMatrix orthonormal_complement(const QMatrix& v);

/// Per-sample reconstruction quality of a training set under one model.
struct ReconstructionReport {
    int r = 0;
    std::vector<double> ratios;     // per sample, storage order
    std::vector<double> residuals;  // ||R - F||_F per sample
};

ReconstructionReport reconstruct_training(const TrainingSet& t,
                                          const EigenfaceModel& m);

}  // namespace qface

#endif  // QFACE_RECONSTRUCT_HPP

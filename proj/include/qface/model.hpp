#ifndef QFACE_MODEL_HPP
#define QFACE_MODEL_HPP

#include <span>
#include <string>
#include <vector>

#include "qface/dataset.hpp"
#include "qface/qeig.hpp"
#include "qface/qmatrix.hpp"

namespace qface {

/// Training flavors. sample_relaxed weights each class's covariance
/// contribution by a softmax of within-class spread and classifies with the
/// eigenvalue-weighted norm; plain is the unweighted variant (uniform class
/// weights, identity classifier weighting), which ignores labels entirely
/// during training.
enum class Mode { sample_relaxed, plain };

std::string mode_name(Mode m);
Mode mode_from_name(const std::string& name);

/// Per-class weights w_1..w_x: each positive, summing to 1.
struct RelaxationVector {
    std::vector<double> weights;
};

/// Covariance stage output: the matrix handed to the eigensolver plus, in
/// sample_relaxed mode, the per-class within-class covariances and their top
/// eigenvalues that produced the weights.
struct CovarianceReport {
    QMatrix g;
    std::vector<QMatrix> within;
    std::vector<double> lambda_max;
    RelaxationVector w;
};

/// Trained projection model at a fixed r.
struct EigenfaceModel {
    QMatrix mean;                          // rows x cols
    QMatrix basis;                         // cols x r, unitary columns
    std::vector<double> d;                 // r retained eigenvalues, descending
    RelaxationVector w;                    // per class
    std::vector<std::string> class_labels;
    Mode mode = Mode::sample_relaxed;
    int rows = 0;
    int cols = 0;
    int r = 0;
};

/// Full-spectrum training result; truncating to any r is then free, which
/// is what the rate-vs-r sweep relies on (the spectrum does not depend
/// on r).
struct TrainedBasis {
    QMatrix mean;
    HermitianEigen eig;
    RelaxationVector w;
    std::vector<std::string> class_labels;
    std::vector<double> lambda_max;
    Mode mode = Mode::sample_relaxed;
    int rows = 0;
    int cols = 0;
};

/// Mean image (1/l) sum F_s. Throws DataError on an empty set.
QMatrix mean_image(const TrainingSet& t);

/// Mean of one class's samples.
QMatrix class_mean(const TrainingSet& t, int a);

/// Total covariance G_t = (1/l) sum (F_s - Psi)^* (F_s - Psi), Hermitian PSD
/// n x n. Throws DataError on an empty set.
QMatrix covariance_total(const TrainingSet& t);

/// Within-class covariance N_a = (1/l_a) sum (F - Psi_a)^* (F - Psi_a)
/// around the class mean.
QMatrix within_class_covariance(const TrainingSet& t, int a);

/// Softmax of the per-class top within-class eigenvalues, computed with
/// max-subtraction so large spreads cannot overflow. All-equal inputs give
/// exactly uniform weights.
RelaxationVector relaxation_vector(std::span<const double> lambda_max);

/// Relaxed covariance G_w = sum_a (w_a / l_a) sum_s (F_s^a - Psi)^*
/// (F_s^a - Psi) with Psi the global mean. With all-singleton labels the
/// weights collapse to 1/l each and G_w equals G_t bitwise. Throws
/// std::invalid_argument when W does not match the class count.
QMatrix covariance_relaxed(const TrainingSet& t, const RelaxationVector& w);

/// Covariance stage for a mode: sample_relaxed computes N_a, lambda_max, W,
/// G_w; plain computes uniform W and G_t without touching labels.
CovarianceReport covariance_report(const TrainingSet& t, Mode mode);

/// Generalized total scatter J(V) = trace(V^* G V), real for Hermitian G.
/// Throws std::invalid_argument when V's columns are not orthonormal
/// within 1e-10.
double total_scatter(const QMatrix& v, const QMatrix& g);

TrainedBasis train_full(const TrainingSet& t, Mode mode);
EigenfaceModel model_at(const TrainedBasis& b, int r);
EigenfaceModel train(const TrainingSet& t, int r, Mode mode);

}  // namespace qface

#endif  // QFACE_MODEL_HPP

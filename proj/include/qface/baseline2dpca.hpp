#ifndef QFACE_BASELINE2DPCA_HPP
#define QFACE_BASELINE2DPCA_HPP

#include <Eigen/Core>

#include <span>
#include <string>
#include <vector>

#include "qface/dataset.hpp"
#include "qface/recognize.hpp"
#include "qface/serialize.hpp"

namespace qface {

/// Grayscale 2DPCA model: the real-arithmetic analogue of the quaternion
/// pipeline with covariance (1/l) sum (F - Psi)^T (F - Psi).
struct RealEigenfaceModel {
    Eigen::MatrixXd mean;   // rows x cols
    Eigen::MatrixXd basis;  // cols x r, orthonormal columns
    std::vector<double> eigenvalues;  // r retained, descending
    int rows = 0;
    int cols = 0;
    int r = 0;
};

struct RealFeature {
    Eigen::MatrixXd p;  // rows x r
    std::string label;
    std::string source;
};

/// Trains on explicit grayscale matrices. Errors mirror the quaternion
/// trainer: DataError on an empty set, std::invalid_argument for r out of
/// [1, n], NumericalError("rank deficient: reduce r") when the retained
/// spectrum is not strictly positive.
RealEigenfaceModel train_2dpca(const std::vector<Eigen::MatrixXd>& samples,
                               int r);

/// Convenience: converts a quaternion training set via BT.601 luma.
RealEigenfaceModel train_2dpca(const TrainingSet& t, int r);

RealFeature project_2dpca(const Eigen::MatrixXd& img,
                          const RealEigenfaceModel& m);

std::vector<RealFeature> gallery_2dpca(const TrainingSet& t,
                                       const RealEigenfaceModel& m);

/// Unweighted Frobenius nearest neighbor, ties to the lowest index.
RecognitionResult classify_2dpca(const Eigen::MatrixXd& query,
                                 const RealEigenfaceModel& m,
                                 std::span<const RealFeature> gallery);

EvaluationReport evaluate_2dpca(const RealEigenfaceModel& m,
                                std::span<const RealFeature> gallery,
                                std::span<const LabeledSample> test);

/// Shares the quaternion model container: real values in the scalar plane,
/// mode "2dpca".
ModelArchive archive_2dpca(const RealEigenfaceModel& m,
                           std::span<const std::string> labels);
RealEigenfaceModel model_2dpca_from_archive(const ModelArchive& a);

}  // namespace qface

#endif  // QFACE_BASELINE2DPCA_HPP

#ifndef QFACE_RECOGNIZE_HPP
#define QFACE_RECOGNIZE_HPP

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qface/dataset.hpp"
#include "qface/model.hpp"
#include "qface/qmatrix.hpp"

namespace qface {

/// Projected sample P = (F - Psi)V: column t is the principal component
/// vector (F - Psi) v_t. Gallery entries keep their label and source.
struct FeatureMatrix {
    QMatrix p;  // rows x r
    std::string label;
    std::string source;
};

struct RecognitionResult {
    std::string predicted;
    int index = -1;        // matched gallery entry
    double distance = 0.0; // minimum over the gallery
    std::vector<double> distances;
};

/// P = (F - Psi)V. Throws std::invalid_argument on a shape mismatch.
FeatureMatrix project(const QMatrix& image, const EigenfaceModel& m);

/// Projects every training sample; gallery order follows the set's
/// class-grouped storage order.
std::vector<FeatureMatrix> project_gallery(const TrainingSet& t,
                                           const EigenfaceModel& m);

/// Weighted: fro_norm((P - Q) D) with D = diag(d); unweighted:
/// fro_norm(P - Q). Throws std::invalid_argument on shape mismatch.
double d_norm_distance(const QMatrix& p, const QMatrix& q,
                       std::span<const double> d, bool weighted);

/// Nearest gallery entry under the mode's distance (sample_relaxed weighs
/// by D, plain does not). Distances evaluate in parallel over the gallery;
/// the argmin scan is serial with ties broken by lowest index. Throws
/// std::invalid_argument on an empty gallery.
RecognitionResult classify(const QMatrix& image, const EigenfaceModel& m,
                           std::span<const FeatureMatrix> gallery);

/// Serial reference of classify, bitwise-identical by construction.
RecognitionResult classify_serial(const QMatrix& image,
                                  const EigenfaceModel& m,
                                  std::span<const FeatureMatrix> gallery);

struct QueryRow {
    std::string query;      // source id
    std::string predicted;
    std::string actual;
    double distance = 0.0;
    bool correct = false;
};

struct EvaluationReport {
    int total = 0;
    int correct = 0;
    double accuracy = 0.0;
    std::vector<QueryRow> rows;                       // manifest order
    std::map<std::pair<std::string, std::string>, int> confusion;
    double mean_latency_ms = 0.0;  // wall clock, excluded from CSV output
};

EvaluationReport evaluate(const EigenfaceModel& m,
                          std::span<const FeatureMatrix> gallery,
                          std::span<const LabeledSample> test);

}  // namespace qface

#endif  // QFACE_RECOGNIZE_HPP

#ifndef QFACE_DATASET_HPP
#define QFACE_DATASET_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "qface/qmatrix.hpp"

namespace qface {

/// One labeled image in its pure-quaternion encoding (entries R i + G j + B k
/// with zero real part, channels in [0, 255]).
struct LabeledSample {
    QMatrix image;
    std::string label;
    std::string source;
};

/// Indices into TrainingSet::samples belonging to one class.
struct ClassGroup {
    std::string label;
    std::vector<int> members;
};

/// Training samples grouped by label: samples of class 0 first, then class 1,
/// and so on, so that covariance accumulation visits samples in a single
/// fixed order regardless of how the set was built.
struct TrainingSet {
    std::vector<LabeledSample> samples;
    std::vector<ClassGroup> classes;
    int rows = 0;
    int cols = 0;

    int total() const { return static_cast<int>(samples.size()); }
    int class_count() const { return static_cast<int>(classes.size()); }
};

/// A training split plus the held-out queries in their original order.
struct Dataset {
    TrainingSet train;
    std::vector<LabeledSample> test;
};

/// Loads a CSV manifest with header `path,label,split` (split is train or
/// test), decoding each referenced P6/P5 image. Paths resolve relative to
/// the manifest's directory. Throws DataError on malformed rows, unreadable
/// or mis-sized images, or an empty training split.
Dataset load_manifest(const std::string& path);

/// Synthetic dataset: per class one random base image (channels uniform in
/// [base_lo, base_hi]), then per sample channelwise Gaussian noise, clamped
/// to [0, 255]. `per_class` training samples and the same number of test
/// samples are drawn for every class. Fully determined by `seed`.
struct SynthSpec {
    int classes = 4;
    int per_class = 5;
    int width = 8;
    int height = 6;
    double noise = 4.0;
    std::uint64_t seed = 7;

    double base_lo = 0.0;
    double base_hi = 255.0;
    /// When non-empty, per-class noise levels overriding `noise`
    /// (size must equal `classes`); used for heterogeneous-variance
    /// benchmarks.
    std::vector<double> class_noise;
};

Dataset synth_dataset(const SynthSpec& spec);

}  // namespace qface

#endif  // QFACE_DATASET_HPP

#ifndef QFACE_TOY_HPP
#define QFACE_TOY_HPP

#include <cstdint>
#include <vector>

namespace qface {

/// One seeded run of the 2-D point-cloud comparison: 2 classes x 200 points,
/// the first 100 of each class train. Points pass through the quaternion
/// pipeline as 1x2 real matrices, so the plain and sample-relaxed trainers
/// are exercised end to end on data where directions can be read off.
struct ToyResult {
    std::vector<double> w;  // relaxation vector, one weight per class

    double v_plain[2];      // principal direction, plain training
    double v_relaxed[2];    // principal direction, sample-relaxed training

    double train_var_plain = 0.0;    // v^T G_train v
    double train_var_relaxed = 0.0;
    double whole_var_plain = 0.0;    // v^T G_whole v over all 400 points
    double whole_var_relaxed = 0.0;

    /// Largest gap between the quadratic-form variance and the direct
    /// projection variance, across both directions and both sets.
    double consistency_err = 0.0;
};

ToyResult run_toy_case(std::uint64_t seed);

}  // namespace qface

#endif  // QFACE_TOY_HPP

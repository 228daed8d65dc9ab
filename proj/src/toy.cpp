#include "qface/toy.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "qface/dataset.hpp"
#include "qface/model.hpp"
#include "qface/qmatrix.hpp"
#include "qface/rng.hpp"

namespace qface {

namespace {

// Two Gaussian classes. Class 0 is elongated along the axis that dominates
// the global scatter; class 1 is isotropic, so its samples inform the
// principal direction less. Spreads are O(1), keeping the softmax far from
// saturation.
// Two overlapping classes around a shared horizontal axis. Class 0 is
// strongly elongated along that axis; class 1 spreads across it. The softmax
// upweights the elongated class, which widens the weighted eigengap and
// damps the cross-axis class's rotational sampling noise, so the relaxed
// direction tracks the population axis more steadily.
constexpr double kCenter[2][2] = {{-1.0, 0.0}, {1.0, 0.0}};
constexpr double kSigma[2][2] = {{1.6, 0.3}, {0.4, 1.0}};
constexpr int kPerClass = 200;
constexpr int kTrainPerClass = 100;

QMatrix point_matrix(double px, double py) {
    QMatrix m(1, 2);
    m.set(0, 0, Quaternion::real(px));
    m.set(0, 1, Quaternion::real(py));
    return m;
}

TrainingSet as_training_set(const std::vector<std::vector<double>>& pts) {
    TrainingSet t;
    t.rows = 1;
    t.cols = 2;
    // Class 0 first, then class 1, matching the generator's order.
    for (int a = 0; a < 2; ++a) {
        ClassGroup g{a == 0 ? "a" : "b", {}};
        for (int k = 0; k < static_cast<int>(pts.size()) / 2; ++k) {
            const auto& p = pts[static_cast<std::size_t>(
                a * (static_cast<int>(pts.size()) / 2) + k)];
            g.members.push_back(t.total());
            t.samples.push_back(LabeledSample{point_matrix(p[0], p[1]),
                                              g.label, ""});
        }
        t.classes.push_back(std::move(g));
    }
    return t;
}

// Direct projection variance (1/l) sum |F_s v - mean(F v)|^2; the oracle
// for the quadratic form v^T G v.
double direct_variance(const TrainingSet& t, const QMatrix& v) {
    std::vector<Quaternion> proj;
    proj.reserve(t.samples.size());
    Quaternion mean;
    for (const auto& s : t.samples) {
        const Quaternion y = matmul(s.image, v)(0, 0);
        proj.push_back(y);
        mean += y;
    }
    mean *= 1.0 / static_cast<double>(proj.size());
    double acc = 0.0;
    for (const Quaternion& y : proj) {
        acc += (y - mean).norm_sq();
    }
    return acc / static_cast<double>(proj.size());
}

}  // namespace

ToyResult run_toy_case(std::uint64_t seed) {
    Rng rng(seed);

    // 200 points per class; the first kTrainPerClass of each class train.
    std::vector<std::vector<double>> train_pts;
    std::vector<std::vector<double>> all_pts;
    for (int a = 0; a < 2; ++a) {
        for (int k = 0; k < kPerClass; ++k) {
            const double px = kCenter[a][0] + kSigma[a][0] * rng.normal();
            const double py = kCenter[a][1] + kSigma[a][1] * rng.normal();
            all_pts.push_back({px, py});
        }
    }
    for (int a = 0; a < 2; ++a) {
        for (int k = 0; k < kTrainPerClass; ++k) {
            train_pts.push_back(
                all_pts[static_cast<std::size_t>(a * kPerClass + k)]);
        }
    }

    const TrainingSet train = as_training_set(train_pts);
    const TrainingSet whole = as_training_set(all_pts);

    const TrainedBasis plain = train_full(train, Mode::plain);
    const TrainedBasis relaxed = train_full(train, Mode::sample_relaxed);
    const QMatrix v_plain = model_at(plain, 1).basis;
    const QMatrix v_relaxed = model_at(relaxed, 1).basis;

    const QMatrix g_train = covariance_total(train);
    const QMatrix g_whole = covariance_total(whole);

    ToyResult res;
    res.w = relaxed.w.weights;
    res.v_plain[0] = v_plain(0, 0).w;
    res.v_plain[1] = v_plain(1, 0).w;
    res.v_relaxed[0] = v_relaxed(0, 0).w;
    res.v_relaxed[1] = v_relaxed(1, 0).w;

    res.train_var_plain = total_scatter(v_plain, g_train);
    res.train_var_relaxed = total_scatter(v_relaxed, g_train);
    res.whole_var_plain = total_scatter(v_plain, g_whole);
    res.whole_var_relaxed = total_scatter(v_relaxed, g_whole);

    res.consistency_err = std::max(
        {std::abs(res.whole_var_plain - direct_variance(whole, v_plain)),
         std::abs(res.whole_var_relaxed -
                  direct_variance(whole, v_relaxed)),
         std::abs(res.train_var_plain - direct_variance(train, v_plain)),
         std::abs(res.train_var_relaxed -
                  direct_variance(train, v_relaxed))});
    return res;
}

}  // namespace qface

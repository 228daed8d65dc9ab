#include "qface/model.hpp"

#include <cmath>
#include <stdexcept>

#include "qface/errors.hpp"

namespace qface {

std::string mode_name(Mode m) {
    return m == Mode::sample_relaxed ? "sr-2dcpca" : "2dcpca";
}

Mode mode_from_name(const std::string& name) {
    if (name == "sr-2dcpca") {
        return Mode::sample_relaxed;
    }
    if (name == "2dcpca") {
        return Mode::plain;
    }
    throw DataError("unknown mode: " + name);
}

namespace {

QMatrix mean_of(std::span<const LabeledSample> samples,
                std::span<const int> subset, int rows, int cols) {
    QMatrix acc(rows, cols);
    for (int idx : subset) {
        acc = add(acc, samples[static_cast<std::size_t>(idx)].image);
    }
    return scale(acc, 1.0 / static_cast<double>(subset.size()));
}

std::vector<int> all_indices(const TrainingSet& t) {
    std::vector<int> idx(static_cast<std::size_t>(t.total()));
    for (int i = 0; i < t.total(); ++i) {
        idx[static_cast<std::size_t>(i)] = i;
    }
    return idx;
}

void check_class_index(const TrainingSet& t, int a) {
    if (a < 0 || a >= t.class_count()) {
        throw std::invalid_argument("class index out of range");
    }
}

}  // namespace

QMatrix mean_image(const TrainingSet& t) {
    if (t.total() == 0) {
        throw DataError("mean_image: empty training set");
    }
    return mean_of(t.samples, all_indices(t), t.rows, t.cols);
}

QMatrix class_mean(const TrainingSet& t, int a) {
    check_class_index(t, a);
    return mean_of(t.samples, t.classes[static_cast<std::size_t>(a)].members,
                   t.rows, t.cols);
}

QMatrix covariance_total(const TrainingSet& t) {
    if (t.total() == 0) {
        throw DataError("covariance_total: empty training set");
    }
    const QMatrix psi = mean_image(t);
    std::vector<QMatrix> devs;
    devs.reserve(static_cast<std::size_t>(t.total()));
    for (const auto& s : t.samples) {
        devs.push_back(sub(s.image, psi));
    }
    const std::vector<double> weights(
        static_cast<std::size_t>(t.total()),
        1.0 / static_cast<double>(t.total()));
    return gram_accumulate(devs, weights);
}

QMatrix within_class_covariance(const TrainingSet& t, int a) {
    check_class_index(t, a);
    const auto& members = t.classes[static_cast<std::size_t>(a)].members;
    const QMatrix psi_a = class_mean(t, a);
    std::vector<QMatrix> devs;
    devs.reserve(members.size());
    for (int idx : members) {
        devs.push_back(sub(t.samples[static_cast<std::size_t>(idx)].image,
                           psi_a));
    }
    const std::vector<double> weights(
        members.size(), 1.0 / static_cast<double>(members.size()));
    return gram_accumulate(devs, weights);
}

RelaxationVector relaxation_vector(std::span<const double> lambda_max) {
    if (lambda_max.empty()) {
        throw std::invalid_argument("relaxation_vector: empty input");
    }
    double top = lambda_max[0];
    double maxabs = 0.0;
    for (double v : lambda_max) {
        top = std::max(top, v);
        maxabs = std::max(maxabs, std::abs(v));
    }
    for (double v : lambda_max) {
        // PSD spectra are nonnegative up to rounding; anything clearly
        // negative is a caller bug.
        if (v < -1e-8 * (1.0 + maxabs)) {
            throw std::invalid_argument(
                "relaxation_vector: negative eigenvalue");
        }
    }

    RelaxationVector w;
    w.weights.resize(lambda_max.size());
    double denom = 0.0;
    for (std::size_t a = 0; a < lambda_max.size(); ++a) {
        w.weights[a] = std::exp(lambda_max[a] - top);
        denom += w.weights[a];
    }
    for (double& v : w.weights) {
        v /= denom;
    }
    return w;
}

QMatrix covariance_relaxed(const TrainingSet& t, const RelaxationVector& w) {
    if (static_cast<int>(w.weights.size()) != t.class_count()) {
        throw std::invalid_argument(
            "covariance_relaxed: weight count does not match class count");
    }
    if (t.total() == 0) {
        throw DataError("covariance_relaxed: empty training set");
    }
    const QMatrix psi = mean_image(t);
    std::vector<QMatrix> devs;
    std::vector<double> weights;
    devs.reserve(static_cast<std::size_t>(t.total()));
    weights.reserve(static_cast<std::size_t>(t.total()));
    for (std::size_t a = 0; a < t.classes.size(); ++a) {
        const auto& members = t.classes[a].members;
        const double per_sample =
            w.weights[a] / static_cast<double>(members.size());
        for (int idx : members) {
            devs.push_back(
                sub(t.samples[static_cast<std::size_t>(idx)].image, psi));
            weights.push_back(per_sample);
        }
    }
    return gram_accumulate(devs, weights);
}

CovarianceReport covariance_report(const TrainingSet& t, Mode mode) {
    CovarianceReport rep;
    const int x = t.class_count();
    if (mode == Mode::sample_relaxed) {
        rep.within.reserve(static_cast<std::size_t>(x));
        rep.lambda_max.reserve(static_cast<std::size_t>(x));
        for (int a = 0; a < x; ++a) {
            rep.within.push_back(within_class_covariance(t, a));
            rep.lambda_max.push_back(heig(rep.within.back()).eigenvalues[0]);
        }
        rep.w = relaxation_vector(rep.lambda_max);
        rep.g = covariance_relaxed(t, rep.w);
    } else {
        rep.w.weights.assign(static_cast<std::size_t>(x),
                             1.0 / static_cast<double>(x));
        rep.g = covariance_total(t);
    }
    return rep;
}

double total_scatter(const QMatrix& v, const QMatrix& g) {
    const int r = v.cols();
    for (int c = 0; c < r; ++c) {
        for (int c2 = c; c2 < r; ++c2) {
            const Quaternion dot = column_dot(v, c, v, c2);
            const double target = c == c2 ? 1.0 : 0.0;
            const double err = std::sqrt((dot - Quaternion::real(target))
                                             .norm_sq());
            if (err > 1e-10) {
                throw std::invalid_argument(
                    "total_scatter: V columns not orthonormal");
            }
        }
    }
    const QMatrix gv = matmul(g, v);
    double j = 0.0;
    for (int c = 0; c < r; ++c) {
        j += column_dot(v, c, gv, c).w;
    }
    return j;
}

TrainedBasis train_full(const TrainingSet& t, Mode mode) {
    if (t.total() == 0) {
        throw DataError("train: empty training set");
    }
    TrainedBasis b;
    b.mode = mode;
    b.rows = t.rows;
    b.cols = t.cols;
    b.mean = mean_image(t);
    for (const auto& cls : t.classes) {
        b.class_labels.push_back(cls.label);
    }
    CovarianceReport rep = covariance_report(t, mode);
    b.w = std::move(rep.w);
    b.lambda_max = std::move(rep.lambda_max);
    b.eig = heig(rep.g);
    return b;
}

EigenfaceModel model_at(const TrainedBasis& b, int r) {
    Subspace s = top_r(b.eig, r);
    EigenfaceModel m;
    m.mean = b.mean;
    m.basis = std::move(s.basis);
    m.d = std::move(s.eigenvalues);
    m.w = b.w;
    m.class_labels = b.class_labels;
    m.mode = b.mode;
    m.rows = b.rows;
    m.cols = b.cols;
    m.r = r;
    return m;
}

EigenfaceModel train(const TrainingSet& t, int r, Mode mode) {
    return model_at(train_full(t, mode), r);
}

}  // namespace qface

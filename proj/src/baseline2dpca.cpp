#include "qface/baseline2dpca.hpp"

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "qface/errors.hpp"
#include "qface/image.hpp"
#include "qface/threads.hpp"

namespace qface {

namespace {

// Deterministic sign gauge: the entry of largest magnitude (first on ties)
// is made positive.
void fix_sign(Eigen::Ref<Eigen::VectorXd> v) {
    int idx = 0;
    double best = -1.0;
    for (int i = 0; i < v.size(); ++i) {
        const double m = std::abs(v(i));
        if (m > best) {
            best = m;
            idx = i;
        }
    }
    if (v(idx) < 0.0) {
        v = -v;
    }
}

}  // namespace

RealEigenfaceModel train_2dpca(const std::vector<Eigen::MatrixXd>& samples,
                               int r) {
    if (samples.empty()) {
        throw DataError("train_2dpca: empty training set");
    }
    const auto rows = samples[0].rows();
    const auto cols = samples[0].cols();
    for (const auto& s : samples) {
        if (s.rows() != rows || s.cols() != cols) {
            throw DataError("train_2dpca: inconsistent dimensions");
        }
    }
    if (r < 1 || r > cols) {
        throw std::invalid_argument("train_2dpca: r must be in [1, n], got " +
                                    std::to_string(r));
    }

    Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(rows, cols);
    for (const auto& s : samples) {
        mean += s;
    }
    mean /= static_cast<double>(samples.size());

    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(cols, cols);
    for (const auto& s : samples) {
        const Eigen::MatrixXd d = s - mean;
        g += d.transpose() * d;
    }
    g /= static_cast<double>(samples.size());

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(g);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("train_2dpca: eigensolver failed");
    }

    RealEigenfaceModel m;
    m.rows = static_cast<int>(rows);
    m.cols = static_cast<int>(cols);
    m.r = r;
    m.mean = std::move(mean);
    m.basis.resize(cols, r);
    m.eigenvalues.resize(static_cast<std::size_t>(r));

    const double lead = solver.eigenvalues()(cols - 1);
    for (int c = 0; c < r; ++c) {
        const double lam = solver.eigenvalues()(cols - 1 - c);
        if (lam <= 1e-12 * lead) {
            throw NumericalError("rank deficient: reduce r");
        }
        m.eigenvalues[static_cast<std::size_t>(c)] = lam;
        m.basis.col(c) = solver.eigenvectors().col(cols - 1 - c);
        fix_sign(m.basis.col(c));
    }
    return m;
}

RealEigenfaceModel train_2dpca(const TrainingSet& t, int r) {
    std::vector<Eigen::MatrixXd> gray;
    gray.reserve(t.samples.size());
    for (const auto& s : t.samples) {
        gray.push_back(to_grayscale(s.image));
    }
    return train_2dpca(gray, r);
}

RealFeature project_2dpca(const Eigen::MatrixXd& img,
                          const RealEigenfaceModel& m) {
    if (img.rows() != m.rows || img.cols() != m.cols) {
        throw std::invalid_argument(
            "project_2dpca: image shape does not match model");
    }
    return RealFeature{(img - m.mean) * m.basis, "", ""};
}

std::vector<RealFeature> gallery_2dpca(const TrainingSet& t,
                                       const RealEigenfaceModel& m) {
    std::vector<RealFeature> gallery;
    gallery.reserve(t.samples.size());
    for (const auto& s : t.samples) {
        RealFeature f = project_2dpca(to_grayscale(s.image), m);
        f.label = s.label;
        f.source = s.source;
        gallery.push_back(std::move(f));
    }
    return gallery;
}

RecognitionResult classify_2dpca(const Eigen::MatrixXd& query,
                                 const RealEigenfaceModel& m,
                                 std::span<const RealFeature> gallery) {
    if (gallery.empty()) {
        throw std::invalid_argument("classify_2dpca: empty gallery");
    }
    const Eigen::MatrixXd p = project_2dpca(query, m).p;
    const int count = static_cast<int>(gallery.size());
    RecognitionResult res;
    res.distances.resize(static_cast<std::size_t>(count));

#pragma omp parallel for schedule(static) num_threads(thread_count())
    for (int i = 0; i < count; ++i) {
        res.distances[static_cast<std::size_t>(i)] =
            (p - gallery[static_cast<std::size_t>(i)].p).norm();
    }

    int best = 0;
    for (int i = 1; i < count; ++i) {
        if (res.distances[static_cast<std::size_t>(i)] <
            res.distances[static_cast<std::size_t>(best)]) {
            best = i;
        }
    }
    res.index = best;
    res.distance = res.distances[static_cast<std::size_t>(best)];
    res.predicted = gallery[static_cast<std::size_t>(best)].label;
    return res;
}

EvaluationReport evaluate_2dpca(const RealEigenfaceModel& m,
                                std::span<const RealFeature> gallery,
                                std::span<const LabeledSample> test) {
    EvaluationReport rep;
    rep.total = static_cast<int>(test.size());
    double elapsed_ms = 0.0;
    for (const auto& q : test) {
        const auto start = std::chrono::steady_clock::now();
        const RecognitionResult r =
            classify_2dpca(to_grayscale(q.image), m, gallery);
        const auto stop = std::chrono::steady_clock::now();
        elapsed_ms +=
            std::chrono::duration<double, std::milli>(stop - start).count();

        QueryRow row;
        row.query = q.source;
        row.predicted = r.predicted;
        row.actual = q.label;
        row.distance = r.distance;
        row.correct = r.predicted == q.label;
        if (row.correct) {
            ++rep.correct;
        }
        ++rep.confusion[{row.actual, row.predicted}];
        rep.rows.push_back(std::move(row));
    }
    rep.accuracy =
        rep.total == 0 ? 0.0
                       : static_cast<double>(rep.correct) / rep.total;
    rep.mean_latency_ms = rep.total == 0 ? 0.0 : elapsed_ms / rep.total;
    return rep;
}

ModelArchive archive_2dpca(const RealEigenfaceModel& m,
                           std::span<const std::string> labels) {
    ModelArchive a;
    a.mode = "2dpca";
    a.rows = m.rows;
    a.cols = m.cols;
    a.r = m.r;
    a.labels.assign(labels.begin(), labels.end());
    a.w.assign(labels.size(),
               labels.empty() ? 1.0 : 1.0 / static_cast<double>(labels.size()));
    a.d = m.eigenvalues;
    a.mean = QMatrix(m.rows, m.cols);
    a.basis = QMatrix(m.cols, m.r);
    for (int i = 0; i < m.rows; ++i) {
        for (int j = 0; j < m.cols; ++j) {
            a.mean.set(i, j, Quaternion::real(m.mean(i, j)));
        }
    }
    for (int i = 0; i < m.cols; ++i) {
        for (int j = 0; j < m.r; ++j) {
            a.basis.set(i, j, Quaternion::real(m.basis(i, j)));
        }
    }
    return a;
}

RealEigenfaceModel model_2dpca_from_archive(const ModelArchive& a) {
    if (a.mode != "2dpca") {
        throw DataError("model archive is not a 2dpca model: " + a.mode);
    }
    RealEigenfaceModel m;
    m.rows = a.rows;
    m.cols = a.cols;
    m.r = a.r;
    m.eigenvalues = a.d;
    m.mean.resize(a.rows, a.cols);
    m.basis.resize(a.cols, a.r);
    for (int i = 0; i < a.rows; ++i) {
        for (int j = 0; j < a.cols; ++j) {
            m.mean(i, j) = a.mean(i, j).w;
        }
    }
    for (int i = 0; i < a.cols; ++i) {
        for (int j = 0; j < a.r; ++j) {
            m.basis(i, j) = a.basis(i, j).w;
        }
    }
    return m;
}

}  // namespace qface

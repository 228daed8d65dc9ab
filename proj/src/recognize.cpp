#include "qface/recognize.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "qface/threads.hpp"

namespace qface {

FeatureMatrix project(const QMatrix& image, const EigenfaceModel& m) {
    if (image.rows() != m.rows || image.cols() != m.cols) {
        throw std::invalid_argument("project: image shape does not match model");
    }
    return FeatureMatrix{matmul(sub(image, m.mean), m.basis), "", ""};
}

std::vector<FeatureMatrix> project_gallery(const TrainingSet& t,
                                           const EigenfaceModel& m) {
    std::vector<FeatureMatrix> gallery;
    gallery.reserve(t.samples.size());
    for (const auto& s : t.samples) {
        FeatureMatrix f = project(s.image, m);
        f.label = s.label;
        f.source = s.source;
        gallery.push_back(std::move(f));
    }
    return gallery;
}

double d_norm_distance(const QMatrix& p, const QMatrix& q,
                       std::span<const double> d, bool weighted) {
    if (!p.same_shape(q)) {
        throw std::invalid_argument("d_norm_distance: shape mismatch");
    }
    if (weighted && static_cast<int>(d.size()) != p.cols()) {
        throw std::invalid_argument("d_norm_distance: weight count mismatch");
    }
    double acc = 0.0;
    for (int c = 0; c < p.cols(); ++c) {
        double col = 0.0;
        for (int i = 0; i < p.rows(); ++i) {
            col += (p(i, c) - q(i, c)).norm_sq();
        }
        const double w = weighted ? d[static_cast<std::size_t>(c)] : 1.0;
        acc += col * w * w;
    }
    return std::sqrt(acc);
}

namespace {

RecognitionResult scan(const QMatrix& features, const EigenfaceModel& m,
                       std::span<const FeatureMatrix> gallery,
                       bool parallel) {
    if (gallery.empty()) {
        throw std::invalid_argument("classify: empty gallery");
    }
    const bool weighted = m.mode == Mode::sample_relaxed;
    const int count = static_cast<int>(gallery.size());
    RecognitionResult res;
    res.distances.resize(static_cast<std::size_t>(count));

    // Each entry's distance is independent, so the result does not depend
    // on the thread count.
    if (parallel) {
#pragma omp parallel for schedule(static) num_threads(thread_count())
        for (int i = 0; i < count; ++i) {
            res.distances[static_cast<std::size_t>(i)] = d_norm_distance(
                features, gallery[static_cast<std::size_t>(i)].p, m.d,
                weighted);
        }
    } else {
        for (int i = 0; i < count; ++i) {
            res.distances[static_cast<std::size_t>(i)] = d_norm_distance(
                features, gallery[static_cast<std::size_t>(i)].p, m.d,
                weighted);
        }
    }

    int best = 0;
    for (int i = 1; i < count; ++i) {
        // Strict comparison keeps the lowest index on ties.
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

}  // namespace

RecognitionResult classify(const QMatrix& image, const EigenfaceModel& m,
                           std::span<const FeatureMatrix> gallery) {
    return scan(project(image, m).p, m, gallery, true);
}

RecognitionResult classify_serial(const QMatrix& image,
                                  const EigenfaceModel& m,
                                  std::span<const FeatureMatrix> gallery) {
    return scan(project(image, m).p, m, gallery, false);
}

EvaluationReport evaluate(const EigenfaceModel& m,
                          std::span<const FeatureMatrix> gallery,
                          std::span<const LabeledSample> test) {
    EvaluationReport rep;
    rep.total = static_cast<int>(test.size());
    double elapsed_ms = 0.0;
    for (const auto& q : test) {
        const auto start = std::chrono::steady_clock::now();
        const RecognitionResult r = classify(q.image, m, gallery);
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

}  // namespace qface

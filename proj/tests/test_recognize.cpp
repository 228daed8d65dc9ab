#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "qface/dataset.hpp"
#include "qface/model.hpp"
#include "qface/recognize.hpp"
#include "qface/threads.hpp"

using namespace qface;

namespace {

QMatrix random_qm(int rows, int cols, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> d(0.0, 255.0);
    QMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            m.set(i, j, {0.0, d(rng), d(rng), d(rng)});
        }
    }
    return m;
}

Dataset separable_dataset(std::uint64_t seed) {
    SynthSpec spec;
    spec.classes = 4;
    spec.per_class = 5;
    spec.width = 6;
    spec.height = 5;
    spec.noise = 1.0;   // well under the expected inter-class distance
    spec.seed = seed;
    return synth_dataset(spec);
}

}  // namespace

TEST_CASE("project computes (F - Psi) V") {
    std::mt19937_64 rng(61);
    const Dataset ds = separable_dataset(3);
    const EigenfaceModel m = train(ds.train, 3, Mode::sample_relaxed);
    const QMatrix f = random_qm(ds.train.rows, ds.train.cols, rng);
    const FeatureMatrix p = project(f, m);
    CHECK(p.p.rows() == ds.train.rows);
    CHECK(p.p.cols() == 3);
    CHECK(fro_norm(sub(p.p, matmul(sub(f, m.mean), m.basis))) == 0.0);

    CHECK_THROWS_AS(project(random_qm(2, 2, rng), m), std::invalid_argument);
}

TEST_CASE("d_norm_distance weights columns by the retained eigenvalues") {
    QMatrix p(2, 2), q(2, 2);
    p.set(0, 0, Quaternion::real(3.0));
    p.set(1, 1, {0, 4, 0, 0});
    // q stays zero; column norms of p - q: 3 and 4
    const std::vector<double> d{2.0, 0.5};
    CHECK(d_norm_distance(p, q, d, false) ==
          doctest::Approx(5.0).epsilon(1e-14));
    // weighted: sqrt((3*2)^2 + (4*0.5)^2) = sqrt(40)
    CHECK(d_norm_distance(p, q, d, true) ==
          doctest::Approx(std::sqrt(40.0)).epsilon(1e-14));
    // metric basics
    CHECK(d_norm_distance(p, p, d, true) == 0.0);
    CHECK(d_norm_distance(q, p, d, true) ==
          doctest::Approx(d_norm_distance(p, q, d, true)));

    CHECK_THROWS_AS(d_norm_distance(p, QMatrix(2, 1), d, false),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        d_norm_distance(p, q, std::vector<double>{1.0}, true),
        std::invalid_argument);
}

TEST_CASE("classify returns the nearest gallery entry") {
    const Dataset ds = separable_dataset(5);
    const EigenfaceModel m = train(ds.train, 4, Mode::sample_relaxed);
    const auto gallery = project_gallery(ds.train, m);
    REQUIRE(gallery.size() == static_cast<std::size_t>(ds.train.total()));

    // every training image matches itself at distance 0
    for (int s = 0; s < ds.train.total(); ++s) {
        const RecognitionResult res = classify(
            ds.train.samples[static_cast<std::size_t>(s)].image, m, gallery);
        CHECK(res.index == s);
        CHECK(res.distance <= 1e-9);
        CHECK(res.predicted ==
              ds.train.samples[static_cast<std::size_t>(s)].label);
        REQUIRE(res.distances.size() == gallery.size());
        // reported distance is the minimum of the vector
        for (double dist : res.distances) {
            CHECK(res.distance <= dist + 1e-15);
        }
    }

    CHECK_THROWS_AS(
        classify(ds.train.samples[0].image, m,
                 std::vector<FeatureMatrix>{}),
        std::invalid_argument);
}

TEST_CASE("ties break to the lowest gallery index") {
    const Dataset ds = separable_dataset(7);
    const EigenfaceModel m = train(ds.train, 2, Mode::plain);
    auto gallery = project_gallery(ds.train, m);
    // duplicate entry 0 at the end under a different label
    FeatureMatrix dup = gallery[0];
    dup.label = "impostor";
    gallery.push_back(dup);
    const RecognitionResult res =
        classify(ds.train.samples[0].image, m, gallery);
    CHECK(res.index == 0);
    CHECK(res.predicted == gallery[0].label);
}

TEST_CASE("classify matches its serial reference bitwise at every cap") {
    const Dataset ds = separable_dataset(11);
    const EigenfaceModel m = train(ds.train, 3, Mode::sample_relaxed);
    const auto gallery = project_gallery(ds.train, m);

    for (const auto& query : ds.test) {
        set_thread_cap(1);
        const RecognitionResult ref = classify_serial(query.image, m, gallery);
        for (int cap : {1, 2, 4, 8}) {
            set_thread_cap(cap);
            const RecognitionResult par = classify(query.image, m, gallery);
            CHECK(par.index == ref.index);
            CHECK(par.distance == ref.distance);
            CHECK(par.distances == ref.distances);
        }
    }
    set_thread_cap(0);
}

TEST_CASE("evaluate scores a separable set perfectly and keeps query order") {
    const Dataset ds = separable_dataset(13);
    const EigenfaceModel m = train(ds.train, 4, Mode::sample_relaxed);
    const auto gallery = project_gallery(ds.train, m);
    const EvaluationReport rep = evaluate(m, gallery, ds.test);

    CHECK(rep.total == static_cast<int>(ds.test.size()));
    CHECK(rep.correct == rep.total);
    CHECK(rep.accuracy == 1.0);
    REQUIRE(rep.rows.size() == ds.test.size());
    for (std::size_t i = 0; i < ds.test.size(); ++i) {
        CHECK(rep.rows[i].query == ds.test[i].source);
        CHECK(rep.rows[i].actual == ds.test[i].label);
        CHECK(rep.rows[i].correct);
    }
    int confusion_total = 0;
    for (const auto& [key, count] : rep.confusion) {
        confusion_total += count;
        CHECK(key.first == key.second);  // perfectly diagonal
    }
    CHECK(confusion_total == rep.total);
    CHECK(rep.mean_latency_ms >= 0.0);
}

// Compares the OpenMP kernels against their serial references and prints a
// wall-clock table. --quick shrinks the sizes for use as a smoke test.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <random>
#include <string>
#include <vector>

#include "qface/dataset.hpp"
#include "qface/model.hpp"
#include "qface/qmatrix.hpp"
#include "qface/recognize.hpp"
#include "qface/threads.hpp"

using namespace qface;

namespace {

QMatrix random_qm(int rows, int cols, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    QMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            m.set(i, j, {d(rng), d(rng), d(rng), d(rng)});
        }
    }
    return m;
}

template <typename F>
double best_ms(int reps, F&& f) {
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        const double ms = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - t0)
                              .count();
        if (ms < best) {
            best = ms;
        }
    }
    return best;
}

void row(const std::string& kernel, const std::string& size,
         double serial_ms, double parallel_ms) {
    std::printf("%-18s %-14s %10.3f %10.3f %8.2fx\n", kernel.c_str(),
                size.c_str(), serial_ms, parallel_ms,
                parallel_ms > 0.0 ? serial_ms / parallel_ms : 0.0);
}

volatile double g_sink = 0.0;

}  // namespace

int main(int argc, char** argv) {
    bool quick = false;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--quick") == 0) {
            quick = true;
        }
    }
    std::mt19937_64 rng(1);

    std::printf("threads: %d\n", thread_count());
    std::printf("%-18s %-14s %10s %10s %9s\n", "kernel", "size", "serial ms",
                "openmp ms", "speedup");

    const std::vector<int> mat_sizes =
        quick ? std::vector<int>{24} : std::vector<int>{64, 128, 192};
    for (int n : mat_sizes) {
        const QMatrix a = random_qm(n, n, rng);
        const QMatrix b = random_qm(n, n, rng);
        const int reps = quick ? 2 : 5;
        const double s =
            best_ms(reps, [&] { g_sink = matmul_serial(a, b)(0, 0).w; });
        const double p =
            best_ms(reps, [&] { g_sink = matmul(a, b)(0, 0).w; });
        if (!matmul(a, b).equals(matmul_serial(a, b))) {
            std::printf("matmul mismatch at n=%d\n", n);
            return 1;
        }
        row("matmul", std::to_string(n) + "x" + std::to_string(n), s, p);
    }

    const std::vector<std::pair<int, int>> gram_shapes =
        quick ? std::vector<std::pair<int, int>>{{16, 12}}
              : std::vector<std::pair<int, int>>{{64, 48}, {96, 80}};
    for (const auto& [rows, cols] : gram_shapes) {
        std::vector<QMatrix> devs;
        std::vector<double> w;
        const int count = quick ? 8 : 40;
        for (int s = 0; s < count; ++s) {
            devs.push_back(random_qm(rows, cols, rng));
            w.push_back(1.0 / count);
        }
        const int reps = quick ? 2 : 5;
        const double s = best_ms(
            reps, [&] { g_sink = gram_accumulate_serial(devs, w)(0, 0).w; });
        const double p =
            best_ms(reps, [&] { g_sink = gram_accumulate(devs, w)(0, 0).w; });
        if (!gram_accumulate(devs, w).equals(
                gram_accumulate_serial(devs, w))) {
            std::printf("gram mismatch\n");
            return 1;
        }
        row("gram_accumulate",
            std::to_string(count) + "x" + std::to_string(rows) + "x" +
                std::to_string(cols),
            s, p);
    }

    {
        SynthSpec spec;
        spec.classes = quick ? 4 : 12;
        spec.per_class = quick ? 4 : 20;
        spec.width = quick ? 8 : 24;
        spec.height = quick ? 6 : 20;
        spec.noise = 8.0;
        spec.seed = 3;
        const Dataset ds = synth_dataset(spec);
        const EigenfaceModel m =
            train(ds.train, quick ? 4 : 10, Mode::sample_relaxed);
        const auto gallery = project_gallery(ds.train, m);
        const QMatrix& query = ds.test.front().image;
        const int reps = quick ? 3 : 10;
        const double s = best_ms(reps, [&] {
            g_sink = classify_serial(query, m, gallery).distance;
        });
        const double p = best_ms(reps, [&] {
            g_sink = classify(query, m, gallery).distance;
        });
        const RecognitionResult rs = classify_serial(query, m, gallery);
        const RecognitionResult rp = classify(query, m, gallery);
        if (rs.index != rp.index || rs.distance != rp.distance) {
            std::printf("classify mismatch\n");
            return 1;
        }
        row("classify", std::to_string(gallery.size()) + " entries", s, p);
    }

    return 0;
}

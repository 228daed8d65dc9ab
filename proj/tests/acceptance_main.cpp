// Acceptance harness: each criterion prints one [PASS]/[FAIL] line and the
// process exits nonzero if any fails. Tolerances are pinned here, next to
// the checks that use them.

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "qface/adjoint.hpp"
#include "qface/baseline2dpca.hpp"
#include "qface/dataset.hpp"
#include "qface/model.hpp"
#include "qface/qeig.hpp"
#include "qface/qmatrix.hpp"
#include "qface/reconstruct.hpp"
#include "qface/recognize.hpp"
#include "qface/serialize.hpp"
#include "qface/toy.hpp"

using namespace qface;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void run_criterion(int idx, const std::string& name,
                   const std::function<std::string()>& body) {
    std::string detail;
    bool ok = false;
    try {
        detail = body();  // empty string means pass
        ok = detail.empty();
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << idx << ": "
              << name;
    if (!ok) {
        std::cout << " -- " << detail;
        ++g_failures;
    }
    std::cout << "\n";
    std::cout.flush();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         t0)
        .count();
}

QMatrix random_qm(int rows, int cols, std::mt19937_64& rng, double lo = -2.0,
                  double hi = 2.0) {
    std::uniform_real_distribution<double> d(lo, hi);
    QMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            m.set(i, j, {d(rng), d(rng), d(rng), d(rng)});
        }
    }
    return m;
}

QMatrix random_hermitian(int n, std::mt19937_64& rng) {
    const QMatrix a = random_qm(n, n, rng);
    return scale(add(a, conj_transpose(a)), 0.5);
}

// Complex-pair representation built from scratch, sharing no code with the
// library: Q = A + B j embeds as [[A, B], [-conj(B), conj(A)]] with
// A = w + x i and B = y + z i.
Eigen::MatrixXcd oracle_embedding(const QMatrix& q) {
    const int rows = q.rows();
    const int cols = q.cols();
    Eigen::MatrixXcd m(2 * rows, 2 * cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            const Quaternion v = q(i, j);
            const std::complex<double> a(v.w, v.x);
            const std::complex<double> b(v.y, v.z);
            m(i, j) = a;
            m(i, cols + j) = b;
            m(rows + i, j) = -std::conj(b);
            m(rows + i, cols + j) = std::conj(a);
        }
    }
    return m;
}

// Descending eigenvalues of a Hermitian quaternion matrix via the embedding:
// the 2n complex eigenvalues come in pairs; keep one of each.
std::vector<double> oracle_eigenvalues(const QMatrix& g) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(oracle_embedding(g));
    if (es.info() != Eigen::Success) {
        throw std::runtime_error("oracle eigensolver failed");
    }
    const int n = g.rows();
    std::vector<double> out;
    for (int t = 2 * n - 1; t >= 0; t -= 2) {
        out.push_back(es.eigenvalues()(t));
    }
    return out;
}

TrainingSet random_training_set(int classes, int per, int rows, int cols,
                                std::mt19937_64& rng) {
    TrainingSet t;
    t.rows = rows;
    t.cols = cols;
    for (int a = 0; a < classes; ++a) {
        ClassGroup g;
        g.label = "c" + std::to_string(a);
        for (int s = 0; s < per; ++s) {
            g.members.push_back(t.total());
            t.samples.push_back({random_qm(rows, cols, rng, 0.0, 255.0),
                                 g.label,
                                 "s" + std::to_string(t.total())});
        }
        t.classes.push_back(g);
    }
    return t;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in.good()) {
        throw std::runtime_error("missing file: " + p.string());
    }
    return {std::istreambuf_iterator<char>(in),
            std::istreambuf_iterator<char>()};
}

int run_cli(const std::string& args, const std::string& env_prefix = "") {
    const char* cli = std::getenv("QFACE_CLI");
    if (!cli) {
        throw std::runtime_error("QFACE_CLI not set");
    }
    static int counter = 0;
    const fs::path log = fs::temp_directory_path() / "qface_acc" /
                         ("log" + std::to_string(counter++) + ".txt");
    fs::create_directories(log.parent_path());
    const std::string cmd = env_prefix + "\"" + std::string(cli) + "\" " +
                            args + " >" + log.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / "qface_acc" / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

// ---------------------------------------------------------------- 1
std::string criterion_eigensolver() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(101);
    std::uniform_int_distribution<int> dim(1, 8);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = dim(rng);
        const QMatrix g = random_hermitian(n, rng);
        const HermitianEigen e = heig(g);
        const double gn = std::max(1.0, fro_norm(g));

        const std::vector<double> ref = oracle_eigenvalues(g);
        for (int c = 0; c < n; ++c) {
            const std::size_t cc = static_cast<std::size_t>(c);
            if (std::abs(e.eigenvalues[cc] - ref[cc]) > 1e-10 * gn) {
                return "trial " + std::to_string(trial) +
                       ": eigenvalue mismatch vs oracle";
            }
        }

        // right-eigenvector residuals and orthonormality
        const QMatrix gv = matmul(g, e.eigenvectors);
        for (int c = 0; c < n; ++c) {
            QMatrix resid(n, 1);
            for (int i = 0; i < n; ++i) {
                resid.set(i, 0,
                          gv(i, c) - e.eigenvectors(i, c) *
                                         e.eigenvalues[static_cast<
                                             std::size_t>(c)]);
            }
            if (fro_norm(resid) > 1e-8 * gn) {
                return "trial " + std::to_string(trial) +
                       ": eigenvector residual too large";
            }
        }
        if (fro_norm(sub(matmul(conj_transpose(e.eigenvectors),
                                e.eigenvectors),
                         QMatrix::identity(n))) > 1e-10) {
            return "trial " + std::to_string(trial) +
                   ": eigenvectors not orthonormal";
        }
    }
    const double dt = seconds_since(t0);
    if (dt >= 10.0) {
        return "took " + std::to_string(dt) + "s (limit 10s)";
    }
    return "";
}

// ---------------------------------------------------------------- 2
std::string criterion_projection_identity() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(202);
    const TrainingSet t = random_training_set(4, 5, 12, 10, rng);
    for (Mode mode : {Mode::sample_relaxed, Mode::plain}) {
        const TrainedBasis basis = train_full(t, mode);
        for (int r = 1; r <= t.cols; ++r) {
            const EigenfaceModel m = model_at(basis, r);
            const QMatrix comp = orthonormal_complement(m.basis);
            for (const auto& s : t.samples) {
                const QMatrix dev = sub(s.image, m.mean);
                const QMatrix back = matmul(project(s.image, m).p,
                                            conj_transpose(m.basis));
                // back-projection error equals the energy outside the
                // retained subspace
                const double lhs = fro_norm(sub(back, dev));
                const double rhs = fro_norm(matmul(dev, comp));
                if (std::abs(lhs - rhs) > 1e-9 * std::max(1.0, rhs)) {
                    return "residual norms differ at r=" + std::to_string(r);
                }
            }
        }
    }
    const double dt = seconds_since(t0);
    if (dt >= 5.0) {
        return "took " + std::to_string(dt) + "s (limit 5s)";
    }
    return "";
}

// ---------------------------------------------------------------- 3
std::string criterion_reconstruction() {
    SynthSpec spec;
    spec.classes = 4;
    spec.per_class = 4;
    spec.width = 7;
    spec.height = 6;
    spec.noise = 10.0;
    spec.seed = 303;
    const Dataset ds = synth_dataset(spec);
    const TrainedBasis basis = train_full(ds.train, Mode::sample_relaxed);

    std::vector<double> prev(static_cast<std::size_t>(ds.train.total()),
                             -1.0);
    for (int r = 1; r <= ds.train.cols; ++r) {
        const ReconstructionReport rep =
            reconstruct_training(ds.train, model_at(basis, r));
        for (std::size_t s = 0; s < rep.ratios.size(); ++s) {
            if (rep.ratios[s] < prev[s] - 1e-12) {
                return "ratio decreased for sample " + std::to_string(s) +
                       " at r=" + std::to_string(r);
            }
            prev[s] = rep.ratios[s];
        }
        if (r == ds.train.cols) {
            for (double v : rep.ratios) {
                if (std::abs(v - 1.0) > 1e-8) {
                    return "full-rank ratio differs from 1";
                }
            }
        }
    }
    return "";
}

// ---------------------------------------------------------------- 4
std::string criterion_singleton_collapse() {
    std::mt19937_64 rng(404);
    for (int trial = 0; trial < 20; ++trial) {
        const TrainingSet t = random_training_set(6, 1, 5, 5, rng);
        const CovarianceReport relaxed =
            covariance_report(t, Mode::sample_relaxed);
        const QMatrix total = covariance_total(t);
        if (fro_norm(sub(relaxed.g, total)) > 1e-12) {
            return "trial " + std::to_string(trial) +
                   ": relaxed covariance differs from total";
        }

        const int r = 3;
        const QMatrix vw = top_r(heig(relaxed.g), r).basis;
        const QMatrix vt = top_r(heig(total), r).basis;
        const QMatrix pw = matmul(vw, conj_transpose(vw));
        const QMatrix pt = matmul(vt, conj_transpose(vt));
        if (fro_norm(sub(pw, pt)) > 1e-8) {
            return "trial " + std::to_string(trial) +
                   ": projection subspaces diverge";
        }
    }
    return "";
}

// ---------------------------------------------------------------- 5
std::string criterion_relaxation_weights() {
    std::mt19937_64 rng(505);
    // spreads up to 1e4: naive exp would overflow, the weights must stay a
    // finite distribution (underflow to an exact 0 weight is acceptable)
    std::uniform_real_distribution<double> mag(0.0, 1.0e4);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> lam;
        const int k = 2 + trial % 7;
        for (int a = 0; a < k; ++a) {
            lam.push_back(mag(rng));
        }
        const RelaxationVector w = relaxation_vector(lam);
        double sum = 0.0;
        for (double v : w.weights) {
            if (!std::isfinite(v) || v < 0.0) {
                return "weight not finite at spread scale 1e4";
            }
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-12) {
            return "weights do not sum to 1";
        }
    }

    // moderate spreads: every weight strictly positive
    std::uniform_real_distribution<double> mod(0.0, 50.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> lam;
        for (int a = 0; a < 4; ++a) {
            lam.push_back(mod(rng));
        }
        for (double v : relaxation_vector(lam).weights) {
            if (!(v > 0.0)) {
                return "moderate spread produced a non-positive weight";
            }
        }
    }

    const RelaxationVector u = relaxation_vector(std::vector<double>{
        3.25, 3.25, 3.25, 3.25});
    for (double v : u.weights) {
        if (v != 0.25) {
            return "equal spreads did not give exactly uniform weights";
        }
    }
    return "";
}

// ---------------------------------------------------------------- 6
std::string criterion_perturbation() {
    std::mt19937_64 rng(606);
    std::uniform_int_distribution<int> dim(2, 6);
    std::uniform_real_distribution<double> rho_d(0.0, 2.0);

    for (int trial = 0; trial < 200; ++trial) {
        const int n = dim(rng);
        const QMatrix a = random_hermitian(n, rng);
        const QMatrix x = random_qm(dim(rng), n, rng);
        const double rho = rho_d(rng);
        const QMatrix b =
            add(a, scale(matmul(conj_transpose(x), x), rho));

        const std::vector<double> la = heig(a).eigenvalues;
        const std::vector<double> lb = heig(b).eigenvalues;
        const double shift = rho * spectral_norm(x) * spectral_norm(x);
        for (int c = 0; c < n; ++c) {
            const std::size_t cc = static_cast<std::size_t>(c);
            if (lb[cc] < la[cc] - 1e-10) {
                return "eigenvalue decreased under a PSD update";
            }
            if (lb[cc] > la[cc] + shift + 1e-10) {
                return "eigenvalue moved past the norm bound";
            }
        }
    }

    // summed form on training covariances: adding one class's scatter moves
    // the top-r energy by at most r times the scaled squared spectral norm
    std::uniform_real_distribution<double> wdist(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 6;
        const TrainingSet base = random_training_set(3, 3, 4, n, rng);
        const QMatrix a = covariance_total(base);

        const int lb_count = 2 + trial % 3;
        QMatrix x(lb_count * 4, n);
        const QMatrix newbie_mean = mean_image(base);
        for (int s = 0; s < lb_count; ++s) {
            const QMatrix dev =
                sub(random_qm(4, n, rng, 0.0, 255.0), newbie_mean);
            for (int i = 0; i < 4; ++i) {
                for (int j = 0; j < n; ++j) {
                    x.set(s * 4 + i, j, dev(i, j));
                }
            }
        }
        const double c = wdist(rng) /
                         (base.total() * static_cast<double>(lb_count));
        const QMatrix b = add(a, scale(matmul(conj_transpose(x), x), c));

        const std::vector<double> la = heig(a).eigenvalues;
        const std::vector<double> lb = heig(b).eigenvalues;
        const int r = 1 + trial % n;
        double sum_a = 0.0;
        double eps = 0.0;
        for (int t = 0; t < r; ++t) {
            sum_a += la[static_cast<std::size_t>(t)];
            eps += lb[static_cast<std::size_t>(t)];
        }
        const double cap =
            sum_a + r * c * spectral_norm(x) * spectral_norm(x);
        if (eps < sum_a - 1e-10 * std::max(1.0, sum_a)) {
            return "top-r energy fell below the unperturbed sum";
        }
        if (eps > cap + 1e-10 * std::max(1.0, cap)) {
            return "top-r energy exceeded the additive bound";
        }
    }
    return "";
}

// ---------------------------------------------------------------- 7
std::string criterion_maximality() {
    std::mt19937_64 rng(707);
    const TrainingSet t = random_training_set(3, 4, 6, 6, rng);
    const QMatrix g = covariance_total(t);
    const HermitianEigen e = heig(g);
    for (int r : {1, 2, 4}) {
        const double best = total_scatter(top_r(e, r).basis, g);
        for (int trial = 0; trial < 100; ++trial) {
            const QMatrix v = orthonormalize_columns(random_qm(6, r, rng));
            if (total_scatter(v, g) > best + 1e-10 * std::max(1.0, best)) {
                return "random frame beat the top-" + std::to_string(r) +
                       " basis";
            }
        }
    }
    return "";
}

// ---------------------------------------------------------------- 8
std::string criterion_benchmark() {
    const auto t0 = std::chrono::steady_clock::now();

    // separable regime: class-mean separation at least 20x the noise image
    // norm, then every method must be perfect for r >= 3
    {
        SynthSpec spec;
        spec.classes = 6;
        spec.per_class = 5;
        spec.width = 8;
        spec.height = 6;
        spec.noise = 2.0;
        spec.seed = 808;
        const Dataset ds = synth_dataset(spec);

        std::vector<QMatrix> means;
        for (int a = 0; a < ds.train.class_count(); ++a) {
            means.push_back(class_mean(ds.train, a));
        }
        const double noise_image_norm =
            spec.noise * std::sqrt(3.0 * spec.width * spec.height);
        for (std::size_t a = 0; a < means.size(); ++a) {
            for (std::size_t b = a + 1; b < means.size(); ++b) {
                if (fro_norm(sub(means[a], means[b])) <
                    20.0 * noise_image_norm) {
                    return "separable premise violated: class gap under "
                           "20x noise";
                }
            }
        }

        for (Mode mode : {Mode::sample_relaxed, Mode::plain}) {
            const TrainedBasis basis = train_full(ds.train, mode);
            for (int r : {3, 5, 8}) {
                const EigenfaceModel m = model_at(basis, r);
                const auto gallery = project_gallery(ds.train, m);
                const EvaluationReport rep = evaluate(m, gallery, ds.test);
                if (rep.accuracy != 1.0) {
                    return mode_name(mode) + " not perfect at r=" +
                           std::to_string(r);
                }
            }
        }
        const RealEigenfaceModel rm = train_2dpca(ds.train, 3);
        const auto rg = gallery_2dpca(ds.train, rm);
        if (evaluate_2dpca(rm, rg, ds.test).accuracy != 1.0) {
            return "grayscale baseline not perfect at r=3";
        }
    }

    // heterogeneous overlap: one very noisy class; relaxed training must
    // stay within one point of plain training on average across seeds
    double sr_mean = 0.0;
    double plain_mean = 0.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        SynthSpec spec;
        spec.classes = 6;
        spec.per_class = 5;
        spec.width = 8;
        spec.height = 6;
        spec.seed = seed;
        spec.base_lo = 100.0;
        spec.base_hi = 160.0;
        spec.class_noise = {55.0, 12.0, 12.0, 12.0, 12.0, 12.0};
        const Dataset ds = synth_dataset(spec);
        for (Mode mode : {Mode::sample_relaxed, Mode::plain}) {
            const TrainedBasis basis = train_full(ds.train, mode);
            const EigenfaceModel m = model_at(basis, 4);
            const auto gallery = project_gallery(ds.train, m);
            const double acc = evaluate(m, gallery, ds.test).accuracy;
            (mode == Mode::sample_relaxed ? sr_mean : plain_mean) += acc;
        }
    }
    sr_mean /= 5.0;
    plain_mean /= 5.0;
    if (sr_mean < plain_mean - 0.01) {
        return "relaxed mean accuracy " + std::to_string(sr_mean) +
               " trails plain " + std::to_string(plain_mean) +
               " by more than 1 point";
    }

    const double dt = seconds_since(t0);
    if (dt >= 60.0) {
        return "took " + std::to_string(dt) + "s (limit 60s)";
    }
    return "";
}

// ---------------------------------------------------------------- 9
std::string criterion_toy() {
    int relaxed_whole_wins = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const ToyResult res = run_toy_case(seed);
        if (res.consistency_err > 1e-10) {
            return "variance bookkeeping off at seed " +
                   std::to_string(seed);
        }
        if (res.train_var_plain < res.train_var_relaxed - 1e-10) {
            return "plain training variance not maximal at seed " +
                   std::to_string(seed);
        }
        if (res.whole_var_relaxed >= res.whole_var_plain) {
            ++relaxed_whole_wins;
        }
    }
    if (relaxed_whole_wins < 3) {
        return "relaxed whole-set variance won only " +
               std::to_string(relaxed_whole_wins) + "/5 seeds";
    }
    return "";
}

// ---------------------------------------------------------------- 10
std::string criterion_determinism() {
    const std::string synth = "--synthetic classes=4,per=4,w=7,h=6,noise=5 "
                              "--seed 42";

    const fs::path a = fresh_dir("det_a");
    const fs::path b = fresh_dir("det_b");
    const std::string eval_args =
        "evaluate " + synth + " --r-range 1..6 --mode sr-2dcpca --out ";
    if (run_cli(eval_args + a.string(), "QFACE_THREADS=1 ") != 0) {
        return "evaluate run 1 failed";
    }
    if (run_cli(eval_args + b.string(), "QFACE_THREADS=4 ") != 0) {
        return "evaluate run 2 failed";
    }
    if (slurp(a / "rate_vs_r.csv") != slurp(b / "rate_vs_r.csv")) {
        return "rate_vs_r.csv differs between identical runs";
    }
    if (slurp(a / "report.csv") != slurp(b / "report.csv")) {
        return "report.csv differs between identical runs";
    }

    const fs::path ta = fresh_dir("det_train_a");
    const fs::path tb = fresh_dir("det_train_b");
    const std::string train_args = "train " + synth + " --r 4 --out ";
    if (run_cli(train_args + ta.string()) != 0 ||
        run_cli(train_args + tb.string()) != 0) {
        return "train run failed";
    }
    if (slurp(ta / "model.qfm") != slurp(tb / "model.qfm")) {
        return "model archives differ between identical runs";
    }

    // save(load(file)) reproduces the bytes exactly
    const ModelArchive arch = load_model((ta / "model.qfm").string());
    const fs::path resaved = ta / "resaved.qfm";
    save_model(resaved.string(), arch);
    if (slurp(ta / "model.qfm") != slurp(resaved)) {
        return "model round trip changed bytes";
    }
    const EigenfaceModel m = model_from_archive(arch);
    const ModelArchive arch2 = load_model(resaved.string());
    const EigenfaceModel m2 = model_from_archive(arch2);
    if (!m.basis.equals(m2.basis) || !m.mean.equals(m2.mean) ||
        m.d != m2.d || m.w.weights != m2.w.weights) {
        return "reloaded model is not bitwise identical";
    }
    return "";
}

}  // namespace

int main() {
    run_criterion(1, "hermitian eigensolver vs oracle",
                  criterion_eigensolver);
    run_criterion(2, "projection residual equals discarded energy",
                  criterion_projection_identity);
    run_criterion(3, "reconstruction ratio behavior",
                  criterion_reconstruction);
    run_criterion(4, "singleton labels collapse to plain training",
                  criterion_singleton_collapse);
    run_criterion(5, "relaxation weights form a stable distribution",
                  criterion_relaxation_weights);
    run_criterion(6, "eigenvalue perturbation bounds",
                  criterion_perturbation);
    run_criterion(7, "top-r subspace maximality", criterion_maximality);
    run_criterion(8, "recognition benchmark", criterion_benchmark);
    run_criterion(9, "planar toy comparison", criterion_toy);
    run_criterion(10, "deterministic artifacts and archives",
                  criterion_determinism);

    if (g_failures != 0) {
        std::cout << g_failures << " criterion(s) failed\n";
        return 1;
    }
    std::cout << "all criteria passed\n";
    return 0;
}

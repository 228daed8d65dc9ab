#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "qface/baseline2dpca.hpp"
#include "qface/csvio.hpp"
#include "qface/dataset.hpp"
#include "qface/errors.hpp"
#include "qface/image.hpp"
#include "qface/model.hpp"
#include "qface/reconstruct.hpp"
#include "qface/recognize.hpp"
#include "qface/serialize.hpp"
#include "qface/toy.hpp"

namespace {

using namespace qface;

constexpr int kExitData = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitUsage = 64;

struct CommonOpts {
    std::string manifest;
    std::string synthetic;
    std::string mode = "sr-2dcpca";
    int r = 0;                // 0 = unset
    std::string r_range;      // "A..B", empty = unset
    std::uint64_t seed = 7;
    std::string out = "out";
    std::string model_path;
};

SynthSpec parse_synth_spec(const std::string& text, std::uint64_t seed) {
    SynthSpec spec;
    spec.seed = seed;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("--synthetic: expected key=value, got '" +
                                        item + "'");
        }
        const std::string key = item.substr(0, eq);
        const std::string val = item.substr(eq + 1);
        try {
            if (key == "classes") {
                spec.classes = std::stoi(val);
            } else if (key == "per") {
                spec.per_class = std::stoi(val);
            } else if (key == "w") {
                spec.width = std::stoi(val);
            } else if (key == "h") {
                spec.height = std::stoi(val);
            } else if (key == "noise") {
                spec.noise = std::stod(val);
            } else {
                throw std::invalid_argument("--synthetic: unknown key '" +
                                            key + "'");
            }
        } catch (const std::invalid_argument&) {
            throw;
        } catch (const std::exception&) {
            throw std::invalid_argument("--synthetic: bad value for '" + key +
                                        "'");
        }
    }
    return spec;
}

Dataset load_source(const CommonOpts& o) {
    const bool has_manifest = !o.manifest.empty();
    const bool has_synth = !o.synthetic.empty();
    if (has_manifest == has_synth) {
        throw std::invalid_argument(
            "exactly one of --manifest and --synthetic is required");
    }
    if (has_manifest) {
        return load_manifest(o.manifest);
    }
    return synth_dataset(parse_synth_spec(o.synthetic, o.seed));
}

// Resolves --r / --r-range against the image width n. Neither given means
// the full sweep 1..n.
std::pair<int, int> resolve_range(const CommonOpts& o, int n) {
    if (o.r != 0 && !o.r_range.empty()) {
        throw std::invalid_argument("--r and --r-range are mutually exclusive");
    }
    int lo = 1;
    int hi = n;
    if (o.r != 0) {
        lo = hi = o.r;
    } else if (!o.r_range.empty()) {
        const auto sep = o.r_range.find("..");
        bool ok = sep != std::string::npos;
        if (ok) {
            try {
                lo = std::stoi(o.r_range.substr(0, sep));
                hi = std::stoi(o.r_range.substr(sep + 2));
            } catch (const std::exception&) {
                ok = false;
            }
        }
        if (!ok) {
            throw std::invalid_argument("--r-range: expected A..B, got '" +
                                        o.r_range + "'");
        }
    }
    if (lo < 1 || hi < lo || hi > n) {
        throw std::invalid_argument(
            "r range [" + std::to_string(lo) + ", " + std::to_string(hi) +
            "] must lie within [1, " + std::to_string(n) + "]");
    }
    return {lo, hi};
}

std::string out_path(const CommonOpts& o, const std::string& name) {
    std::filesystem::create_directories(o.out);
    return (std::filesystem::path(o.out) / name).string();
}

void write_json(const std::string& path, const nlohmann::json& j) {
    write_text_atomic(path, j.dump(2) + "\n");
}

// CSV cells are never quoted; reject the delimiters instead of corrupting
// rows silently.
std::string csv_cell(const std::string& s) {
    if (s.find(',') != std::string::npos ||
        s.find('\n') != std::string::npos) {
        throw DataError("value not representable in CSV: " + s);
    }
    return s;
}

RealEigenfaceModel truncate_real(const RealEigenfaceModel& full, int r) {
    RealEigenfaceModel m;
    m.rows = full.rows;
    m.cols = full.cols;
    m.r = r;
    m.mean = full.mean;
    m.basis = full.basis.leftCols(r);
    m.eigenvalues.assign(full.eigenvalues.begin(),
                         full.eigenvalues.begin() + r);
    return m;
}

// Real features ride in the scalar plane of the shared gallery container.
std::vector<FeatureMatrix> wrap_real_gallery(
    const std::vector<RealFeature>& gallery) {
    std::vector<FeatureMatrix> out;
    out.reserve(gallery.size());
    for (const auto& f : gallery) {
        FeatureMatrix q;
        q.p = QMatrix(static_cast<int>(f.p.rows()),
                      static_cast<int>(f.p.cols()));
        for (int i = 0; i < f.p.rows(); ++i) {
            for (int j = 0; j < f.p.cols(); ++j) {
                q.p.set(i, j, Quaternion::real(f.p(i, j)));
            }
        }
        q.label = f.label;
        q.source = f.source;
        out.push_back(std::move(q));
    }
    return out;
}

nlohmann::json confusion_json(const EvaluationReport& rep) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& [pair, count] : rep.confusion) {
        j.push_back({{"actual", pair.first},
                     {"predicted", pair.second},
                     {"count", count}});
    }
    return j;
}

int run_train(const CommonOpts& o) {
    const auto start = std::chrono::steady_clock::now();
    const Dataset ds = load_source(o);
    const int n = ds.train.cols;
    const int r = o.r != 0 ? o.r : std::min(4, n);
    if (!o.r_range.empty()) {
        throw std::invalid_argument("train takes --r, not --r-range");
    }
    if (r < 1 || r > n) {
        throw std::invalid_argument("--r must lie within [1, " +
                                    std::to_string(n) + "]");
    }

    const std::string model_file =
        o.model_path.empty() ? out_path(o, "model.qfm") : o.model_path;

    nlohmann::json log{{"mode", o.mode},
                       {"rows", ds.train.rows},
                       {"cols", n},
                       {"r", r},
                       {"train_samples", ds.train.total()},
                       {"classes", ds.train.class_count()}};

    if (o.mode == "2dpca") {
        const RealEigenfaceModel m = train_2dpca(ds.train, r);
        std::vector<std::string> labels;
        for (const auto& cls : ds.train.classes) {
            labels.push_back(cls.label);
        }
        save_model(model_file, archive_2dpca(m, labels));
        save_gallery(out_path(o, "gallery.qfg"),
                     wrap_real_gallery(gallery_2dpca(ds.train, m)));
        log["eigenvalues"] = m.eigenvalues;
    } else {
        const TrainedBasis basis =
            train_full(ds.train, mode_from_name(o.mode));
        const EigenfaceModel m = model_at(basis, r);
        save_model(model_file, to_archive(m));
        save_gallery(out_path(o, "gallery.qfg"), project_gallery(ds.train, m));
        log["labels"] = basis.class_labels;
        log["w"] = basis.w.weights;
        log["lambda_max"] = basis.lambda_max;
        log["eigenvalues"] = basis.eig.eigenvalues;
    }

    const auto stop = std::chrono::steady_clock::now();
    log["wall_ms"] =
        std::chrono::duration<double, std::milli>(stop - start).count();
    log["model"] = model_file;
    write_json(out_path(o, "train_log.json"), log);
    std::cout << "trained " << o.mode << " model (r=" << r << ") -> "
              << model_file << "\n";
    return 0;
}

int run_evaluate(const CommonOpts& o) {
    const Dataset ds = load_source(o);
    if (ds.test.empty()) {
        throw DataError("evaluate: test split is empty");
    }
    const int n = ds.train.cols;

    std::string rate_csv = "r,method,accuracy\n";
    EvaluationReport last;
    int last_r = 0;
    std::string method = o.mode;

    if (!o.model_path.empty()) {
        if (o.r != 0 || !o.r_range.empty()) {
            throw std::invalid_argument(
                "--model fixes r; --r/--r-range not allowed");
        }
        const ModelArchive a = load_model(o.model_path);
        method = a.mode;
        if (a.mode == "2dpca") {
            const RealEigenfaceModel m = model_2dpca_from_archive(a);
            const auto gallery = gallery_2dpca(ds.train, m);
            std::vector<LabeledSample> const& test = ds.test;
            last = evaluate_2dpca(m, gallery, test);
        } else {
            const EigenfaceModel m = model_from_archive(a);
            const auto gallery = project_gallery(ds.train, m);
            last = evaluate(m, gallery, ds.test);
        }
        last_r = a.r;
        rate_csv += std::to_string(a.r) + "," + method + "," +
                    format_double(last.accuracy) + "\n";
    } else {
        const auto [lo, hi] = resolve_range(o, n);
        if (o.mode == "2dpca") {
            const RealEigenfaceModel full = train_2dpca(ds.train, hi);
            for (int r = lo; r <= hi; ++r) {
                const RealEigenfaceModel m = truncate_real(full, r);
                const auto gallery = gallery_2dpca(ds.train, m);
                const EvaluationReport rep =
                    evaluate_2dpca(m, gallery, ds.test);
                rate_csv += std::to_string(r) + "," + method + "," +
                            format_double(rep.accuracy) + "\n";
                if (r == hi) {
                    last = rep;
                    last_r = r;
                }
            }
        } else {
            const TrainedBasis basis =
                train_full(ds.train, mode_from_name(o.mode));
            for (int r = lo; r <= hi; ++r) {
                const EigenfaceModel m = model_at(basis, r);
                const auto gallery = project_gallery(ds.train, m);
                const EvaluationReport rep = evaluate(m, gallery, ds.test);
                rate_csv += std::to_string(r) + "," + method + "," +
                            format_double(rep.accuracy) + "\n";
                if (r == hi) {
                    last = rep;
                    last_r = r;
                }
            }
        }
    }

    std::string report_csv = "query,predicted,actual,distance,correct\n";
    for (const auto& row : last.rows) {
        report_csv += csv_cell(row.query) + "," + csv_cell(row.predicted) +
                      "," + csv_cell(row.actual) + "," +
                      format_double(row.distance) + "," +
                      (row.correct ? "1" : "0") + "\n";
    }

    write_text_atomic(out_path(o, "rate_vs_r.csv"), rate_csv);
    write_text_atomic(out_path(o, "report.csv"), report_csv);
    write_json(out_path(o, "summary.json"),
               nlohmann::json{{"method", method},
                              {"r", last_r},
                              {"accuracy", last.accuracy},
                              {"correct", last.correct},
                              {"total", last.total},
                              {"confusion", confusion_json(last)},
                              {"mean_latency_ms", last.mean_latency_ms}});
    std::cout << "accuracy " << format_double(last.accuracy) << " ("
              << last.correct << "/" << last.total << ") at r=" << last_r
              << " [" << method << "]\n";
    return 0;
}

int run_reconstruct(const CommonOpts& o) {
    if (o.mode == "2dpca") {
        throw std::invalid_argument(
            "reconstruct supports sr-2dcpca and 2dcpca only");
    }
    const Dataset ds = load_source(o);
    const int n = ds.train.cols;
    const auto [lo, hi] = resolve_range(o, n);

    const TrainedBasis basis = train_full(ds.train, mode_from_name(o.mode));

    std::string ratio_csv = "sample,r,ratio,residual\n";
    double mean_ratio_at_hi = 0.0;
    for (int r = lo; r <= hi; ++r) {
        const EigenfaceModel m = model_at(basis, r);
        const ReconstructionReport rep = reconstruct_training(ds.train, m);
        for (std::size_t s = 0; s < rep.ratios.size(); ++s) {
            ratio_csv += std::to_string(s) + "," + std::to_string(r) + "," +
                         format_double(rep.ratios[s]) + "," +
                         format_double(rep.residuals[s]) + "\n";
        }
        for (int s = 0; s < ds.train.total(); ++s) {
            const QMatrix recon = reconstruct(
                project(ds.train.samples[static_cast<std::size_t>(s)].image,
                        m)
                    .p,
                m);
            write_ppm(out_path(o, "recon_s" + std::to_string(s) + "_r" +
                                      std::to_string(r) + ".ppm"),
                      from_qmatrix(recon));
        }
        if (r == hi) {
            for (double v : rep.ratios) {
                mean_ratio_at_hi += v;
            }
            mean_ratio_at_hi /= static_cast<double>(rep.ratios.size());
        }
    }

    std::vector<std::string> sources;
    for (const auto& s : ds.train.samples) {
        sources.push_back(s.source);
    }
    write_text_atomic(out_path(o, "ratio.csv"), ratio_csv);
    write_json(out_path(o, "summary.json"),
               nlohmann::json{{"method", o.mode},
                              {"r_lo", lo},
                              {"r_hi", hi},
                              {"samples", sources},
                              {"mean_ratio_at_r_hi", mean_ratio_at_hi}});
    std::cout << "reconstructed " << ds.train.total() << " samples for r in ["
              << lo << ", " << hi << "], mean ratio at r=" << hi << ": "
              << format_double(mean_ratio_at_hi) << "\n";
    return 0;
}

int run_toy(const CommonOpts& o) {
    const ToyResult res = run_toy_case(o.seed);

    std::string csv = "method,v1,v2,train_variance,whole_variance,w1,w2\n";
    csv += "2dcpca," + format_double(res.v_plain[0]) + "," +
           format_double(res.v_plain[1]) + "," +
           format_double(res.train_var_plain) + "," +
           format_double(res.whole_var_plain) + ",0.5,0.5\n";
    csv += "sr-2dcpca," + format_double(res.v_relaxed[0]) + "," +
           format_double(res.v_relaxed[1]) + "," +
           format_double(res.train_var_relaxed) + "," +
           format_double(res.whole_var_relaxed) + "," +
           format_double(res.w[0]) + "," + format_double(res.w[1]) + "\n";
    write_text_atomic(out_path(o, "toy.csv"), csv);

    std::cout << "seed " << o.seed << ", relaxation vector ["
              << format_double(res.w[0]) << ", " << format_double(res.w[1])
              << "]\n";
    std::cout << "case | variance of training points | variance of the whole points\n";
    std::cout << "     | 2dcpca      sr-2dcpca       | 2dcpca      sr-2dcpca\n";
    std::cout << "  1  | " << format_double(res.train_var_plain) << "  "
              << format_double(res.train_var_relaxed) << "  | "
              << format_double(res.whole_var_plain) << "  "
              << format_double(res.whole_var_relaxed) << "\n";
    std::cout << "directions: 2dcpca (" << format_double(res.v_plain[0])
              << ", " << format_double(res.v_plain[1]) << "), sr-2dcpca ("
              << format_double(res.v_relaxed[0]) << ", "
              << format_double(res.v_relaxed[1]) << ")\n";
    return 0;
}

void add_common(CLI::App* cmd, CommonOpts& o, bool data_source,
                bool takes_r) {
    if (data_source) {
        cmd->add_option("--manifest", o.manifest,
                        "CSV manifest (path,label,split)");
        cmd->add_option("--synthetic", o.synthetic,
                        "synthetic spec classes=K,per=N,w=W,h=H,noise=S");
        cmd->add_option("--mode", o.mode, "sr-2dcpca | 2dcpca | 2dpca")
            ->check(CLI::IsMember({"sr-2dcpca", "2dcpca", "2dpca"}));
    }
    if (takes_r) {
        cmd->add_option("--r", o.r, "subspace dimension");
        cmd->add_option("--r-range", o.r_range, "sweep A..B");
    }
    cmd->add_option("--seed", o.seed, "RNG seed (synthetic data, toy)");
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_option("--model", o.model_path, "model archive path");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quaternion 2D color PCA: training, recognition, "
                 "reconstruction"};
    app.require_subcommand(0, 1);

    CommonOpts train_o, eval_o, recon_o, toy_o;
    CLI::App* cmd_train =
        app.add_subcommand("train", "train a model and build the gallery");
    add_common(cmd_train, train_o, true, true);
    CLI::App* cmd_eval = app.add_subcommand(
        "evaluate", "recognition accuracy on the test split");
    add_common(cmd_eval, eval_o, true, true);
    CLI::App* cmd_recon = app.add_subcommand(
        "reconstruct", "reconstruct training images across r");
    add_common(cmd_recon, recon_o, true, true);
    CLI::App* cmd_toy = app.add_subcommand(
        "toy", "2-D two-class variance comparison table");
    add_common(cmd_toy, toy_o, false, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (cmd_train->parsed()) {
            return run_train(train_o);
        }
        if (cmd_eval->parsed()) {
            return run_evaluate(eval_o);
        }
        if (cmd_recon->parsed()) {
            return run_reconstruct(recon_o);
        }
        if (cmd_toy->parsed()) {
            return run_toy(toy_o);
        }
        std::cerr << app.help();
        return kExitUsage;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

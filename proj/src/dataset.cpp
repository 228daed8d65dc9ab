#include "qface/dataset.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "qface/errors.hpp"
#include "qface/image.hpp"
#include "qface/rng.hpp"

namespace qface {

namespace {

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    return line;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

// Appends a sample to the set, grouping by label in first-appearance order.
void add_train_sample(TrainingSet& t, LabeledSample s) {
    const int idx = t.total();
    for (auto& cls : t.classes) {
        if (cls.label == s.label) {
            cls.members.push_back(idx);
            t.samples.push_back(std::move(s));
            return;
        }
    }
    t.classes.push_back(ClassGroup{s.label, {idx}});
    t.samples.push_back(std::move(s));
}

// Regroups so that storage order is class-grouped (class 0's samples first).
TrainingSet regroup(TrainingSet& t) {
    TrainingSet out;
    out.rows = t.rows;
    out.cols = t.cols;
    for (const auto& cls : t.classes) {
        ClassGroup g{cls.label, {}};
        for (int idx : cls.members) {
            g.members.push_back(out.total());
            out.samples.push_back(std::move(t.samples[idx]));
        }
        out.classes.push_back(std::move(g));
    }
    return out;
}

void check_dims(int& rows, int& cols, const QMatrix& img,
                const std::string& source) {
    if (rows == 0 && cols == 0) {
        rows = img.rows();
        cols = img.cols();
        return;
    }
    if (img.rows() != rows || img.cols() != cols) {
        throw DataError("inconsistent dimensions: " + source);
    }
}

}  // namespace

Dataset load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError(path + ": cannot open manifest");
    }
    const auto base_dir = std::filesystem::path(path).parent_path();

    std::string line;
    if (!std::getline(in, line) || strip_cr(line) != "path,label,split") {
        throw DataError(path + ": manifest must start with header path,label,split");
    }

    Dataset ds;
    int rows = 0;
    int cols = 0;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        line = strip_cr(line);
        if (line.empty()) {
            continue;
        }
        const auto fields = split_csv(line);
        if (fields.size() != 3) {
            throw DataError(path + ":" + std::to_string(lineno) +
                            ": expected 3 columns");
        }
        const std::string& rel = fields[0];
        const std::string& label = fields[1];
        const std::string& split = fields[2];
        if (split != "train" && split != "test") {
            throw DataError(path + ":" + std::to_string(lineno) +
                            ": split must be train or test, got '" + split +
                            "'");
        }
        std::filesystem::path img_path(rel);
        if (img_path.is_relative()) {
            img_path = base_dir / img_path;
        }
        const std::string source = img_path.string();
        QMatrix img = to_qmatrix(read_image(source));
        check_dims(rows, cols, img, source);
        if (split == "train") {
            ds.train.rows = rows;
            ds.train.cols = cols;
            add_train_sample(ds.train,
                             LabeledSample{std::move(img), label, source});
        } else {
            ds.test.push_back(LabeledSample{std::move(img), label, source});
        }
    }
    if (ds.train.total() == 0) {
        throw DataError(path + ": empty training split");
    }
    ds.train.rows = rows;
    ds.train.cols = cols;
    ds.train = regroup(ds.train);
    return ds;
}

Dataset synth_dataset(const SynthSpec& spec) {
    if (spec.classes < 1 || spec.per_class < 1) {
        throw DataError("synthetic spec: classes and per-class count must be >= 1");
    }
    if (spec.width < 2 || spec.height < 2) {
        throw DataError("synthetic spec: dimensions must be at least 2x2");
    }
    if (spec.noise < 0.0) {
        throw DataError("synthetic spec: noise must be >= 0");
    }
    if (!spec.class_noise.empty() &&
        static_cast<int>(spec.class_noise.size()) != spec.classes) {
        throw DataError("synthetic spec: class_noise size must equal classes");
    }

    Rng rng(spec.seed);
    Dataset ds;
    ds.train.rows = spec.height;
    ds.train.cols = spec.width;

    for (int a = 0; a < spec.classes; ++a) {
        const std::string label = "class" + std::to_string(a);
        const double sigma =
            spec.class_noise.empty() ? spec.noise : spec.class_noise[a];

        QMatrix base(spec.height, spec.width);
        for (int i = 0; i < spec.height; ++i) {
            for (int j = 0; j < spec.width; ++j) {
                base.set(i, j,
                         Quaternion{0.0,
                                    rng.uniform(spec.base_lo, spec.base_hi),
                                    rng.uniform(spec.base_lo, spec.base_hi),
                                    rng.uniform(spec.base_lo, spec.base_hi)});
            }
        }

        auto draw = [&](const std::string& tag, int k) {
            QMatrix img(spec.height, spec.width);
            for (int i = 0; i < spec.height; ++i) {
                for (int j = 0; j < spec.width; ++j) {
                    const Quaternion b = base(i, j);
                    auto channel = [&](double v) {
                        return std::clamp(v + sigma * rng.normal(), 0.0,
                                          255.0);
                    };
                    img.set(i, j,
                            Quaternion{0.0, channel(b.x), channel(b.y),
                                       channel(b.z)});
                }
            }
            return LabeledSample{std::move(img), label,
                                 "synthetic:" + label + ":" + tag +
                                     std::to_string(k)};
        };

        ClassGroup g{label, {}};
        for (int k = 0; k < spec.per_class; ++k) {
            g.members.push_back(ds.train.total());
            ds.train.samples.push_back(draw("train", k));
        }
        ds.train.classes.push_back(std::move(g));
        for (int k = 0; k < spec.per_class; ++k) {
            ds.test.push_back(draw("test", k));
        }
    }
    return ds;
}

}  // namespace qface

#include "qface/serialize.hpp"

#include <json.hpp>

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "qface/errors.hpp"

namespace qface {

namespace {

constexpr char kModelMagic[9] = "QFACEMD1";
constexpr char kGalleryMagic[9] = "QFACEGL1";

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) {
        out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    }
}

void put_f64(std::string& out, double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) {
        out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
    }
}

void put_plane(std::string& out, std::span<const double> plane) {
    for (double v : plane) {
        put_f64(out, v);
    }
}

void put_qmatrix(std::string& out, const QMatrix& m) {
    put_plane(out, m.plane_w());
    put_plane(out, m.plane_x());
    put_plane(out, m.plane_y());
    put_plane(out, m.plane_z());
}

class Reader {
public:
    Reader(std::string data, std::string path)
        : data_(std::move(data)), path_(std::move(path)) {}

    void expect_magic(const char* magic) {
        if (data_.size() < 8 || data_.compare(0, 8, magic) != 0) {
            throw DataError(path_ + ": bad magic");
        }
        pos_ = 8;
    }

    std::uint32_t get_u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) {
            v |= static_cast<std::uint32_t>(
                     static_cast<unsigned char>(data_[pos_ + i]))
                 << (8 * i);
        }
        pos_ += 4;
        return v;
    }

    std::string get_bytes(std::size_t n) {
        need(n);
        std::string s = data_.substr(pos_, n);
        pos_ += n;
        return s;
    }

    double get_f64() {
        need(8);
        std::uint64_t bits = 0;
        for (int i = 0; i < 8; ++i) {
            bits |= static_cast<std::uint64_t>(
                        static_cast<unsigned char>(data_[pos_ + i]))
                    << (8 * i);
        }
        pos_ += 8;
        return std::bit_cast<double>(bits);
    }

    void get_plane(std::span<double> plane) {
        for (double& v : plane) {
            v = get_f64();
        }
    }

    QMatrix get_qmatrix(int rows, int cols) {
        QMatrix m(rows, cols);
        get_plane(m.plane_w());
        get_plane(m.plane_x());
        get_plane(m.plane_y());
        get_plane(m.plane_z());
        return m;
    }

    void expect_end() const {
        if (pos_ != data_.size()) {
            throw DataError(path_ + ": trailing bytes");
        }
    }

    const std::string& path() const { return path_; }

private:
    void need(std::size_t n) const {
        if (pos_ + n > data_.size()) {
            throw DataError(path_ + ": truncated archive");
        }
    }

    std::string data_;
    std::string path_;
    std::size_t pos_ = 0;
};

void write_file_atomic(const std::string& path, const std::string& bytes) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw DataError(tmp + ": cannot open for writing");
        }
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) {
            throw DataError(tmp + ": write failed");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        throw DataError(path + ": rename failed: " + ec.message());
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError(path + ": cannot open");
    }
    std::string data((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return data;
}

nlohmann::json parse_header(Reader& r) {
    const std::uint32_t len = r.get_u32();
    const std::string text = r.get_bytes(len);
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw DataError(r.path() + ": bad header: " + e.what());
    }
}

}  // namespace

void save_model(const std::string& path, const ModelArchive& m) {
    nlohmann::json header{{"format", 1},    {"mode", m.mode},
                          {"rows", m.rows}, {"cols", m.cols},
                          {"r", m.r},       {"labels", m.labels},
                          {"w", m.w},       {"d", m.d}};
    const std::string htext = header.dump();

    std::string bytes;
    bytes.append(kModelMagic, 8);
    put_u32(bytes, static_cast<std::uint32_t>(htext.size()));
    bytes.append(htext);
    put_qmatrix(bytes, m.mean);
    put_qmatrix(bytes, m.basis);
    write_file_atomic(path, bytes);
}

ModelArchive load_model(const std::string& path) {
    Reader r(read_file(path), path);
    r.expect_magic(kModelMagic);
    const nlohmann::json header = parse_header(r);
    try {
        ModelArchive m;
        m.mode = header.at("mode").get<std::string>();
        m.rows = header.at("rows").get<int>();
        m.cols = header.at("cols").get<int>();
        m.r = header.at("r").get<int>();
        m.labels = header.at("labels").get<std::vector<std::string>>();
        m.w = header.at("w").get<std::vector<double>>();
        m.d = header.at("d").get<std::vector<double>>();
        if (header.at("format").get<int>() != 1) {
            throw DataError(path + ": unsupported format");
        }
        if (m.rows < 1 || m.cols < 1 || m.r < 1 || m.r > m.cols ||
            static_cast<int>(m.d.size()) != m.r) {
            throw DataError(path + ": inconsistent header");
        }
        m.mean = r.get_qmatrix(m.rows, m.cols);
        m.basis = r.get_qmatrix(m.cols, m.r);
        r.expect_end();
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(path + ": bad header: " + e.what());
    }
}

ModelArchive to_archive(const EigenfaceModel& m) {
    ModelArchive a;
    a.mode = mode_name(m.mode);
    a.rows = m.rows;
    a.cols = m.cols;
    a.r = m.r;
    a.labels = m.class_labels;
    a.w = m.w.weights;
    a.d = m.d;
    a.mean = m.mean;
    a.basis = m.basis;
    return a;
}

EigenfaceModel model_from_archive(const ModelArchive& a) {
    EigenfaceModel m;
    m.mode = mode_from_name(a.mode);  // rejects "2dpca"
    m.rows = a.rows;
    m.cols = a.cols;
    m.r = a.r;
    m.class_labels = a.labels;
    m.w.weights = a.w;
    m.d = a.d;
    m.mean = a.mean;
    m.basis = a.basis;
    return m;
}

void save_gallery(const std::string& path,
                  std::span<const FeatureMatrix> gallery) {
    std::vector<std::string> labels;
    std::vector<std::string> sources;
    for (const auto& f : gallery) {
        labels.push_back(f.label);
        sources.push_back(f.source);
    }
    const int rows = gallery.empty() ? 0 : gallery[0].p.rows();
    const int cols = gallery.empty() ? 0 : gallery[0].p.cols();
    nlohmann::json header{{"format", 1},
                          {"count", gallery.size()},
                          {"rows", rows},
                          {"cols", cols},
                          {"labels", labels},
                          {"sources", sources}};
    const std::string htext = header.dump();

    std::string bytes;
    bytes.append(kGalleryMagic, 8);
    put_u32(bytes, static_cast<std::uint32_t>(htext.size()));
    bytes.append(htext);
    for (const auto& f : gallery) {
        if (f.p.rows() != rows || f.p.cols() != cols) {
            throw DataError(path + ": gallery entries differ in shape");
        }
        put_qmatrix(bytes, f.p);
    }
    write_file_atomic(path, bytes);
}

std::vector<FeatureMatrix> load_gallery(const std::string& path) {
    Reader r(read_file(path), path);
    r.expect_magic(kGalleryMagic);
    const nlohmann::json header = parse_header(r);
    try {
        const auto count = header.at("count").get<std::size_t>();
        const int rows = header.at("rows").get<int>();
        const int cols = header.at("cols").get<int>();
        const auto labels =
            header.at("labels").get<std::vector<std::string>>();
        const auto sources =
            header.at("sources").get<std::vector<std::string>>();
        if (header.at("format").get<int>() != 1 || labels.size() != count ||
            sources.size() != count) {
            throw DataError(path + ": inconsistent header");
        }
        std::vector<FeatureMatrix> gallery;
        gallery.reserve(count);
        for (std::size_t i = 0; i < count; ++i) {
            FeatureMatrix f;
            f.p = r.get_qmatrix(rows, cols);
            f.label = labels[i];
            f.source = sources[i];
            gallery.push_back(std::move(f));
        }
        r.expect_end();
        return gallery;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(path + ": bad header: " + e.what());
    }
}

}  // namespace qface

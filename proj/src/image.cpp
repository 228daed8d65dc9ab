#include "qface/image.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <vector>

#include "qface/errors.hpp"

namespace qface {

namespace {

// Reads the next header token, skipping whitespace and '#' comments.
std::string next_token(std::istream& in, const std::string& path) {
    int c = in.get();
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') {
                c = in.get();
            }
        } else if (std::isspace(c)) {
            c = in.get();
        } else {
            break;
        }
    }
    if (c == EOF) {
        throw DataError(path + ": truncated header");
    }
    std::string tok;
    while (c != EOF && !std::isspace(c)) {
        tok.push_back(static_cast<char>(c));
        c = in.get();
    }
    return tok;
}

int parse_dim(const std::string& tok, const std::string& path,
              const char* what) {
    int v = 0;
    for (char ch : tok) {
        if (ch < '0' || ch > '9') {
            throw DataError(path + ": malformed " + what);
        }
        v = v * 10 + (ch - '0');
        if (v > 1 << 20) {
            throw DataError(path + ": " + what + " out of range");
        }
    }
    if (tok.empty() || v <= 0) {
        throw DataError(path + ": malformed " + what);
    }
    return v;
}

ColorImage read_netpbm(const std::string& path, bool expect_color) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError(path + ": cannot open");
    }
    const std::string magic = next_token(in, path);
    const std::string want = expect_color ? "P6" : "P5";
    if (magic != want) {
        throw DataError(path + ": bad magic, expected " + want);
    }
    const int w = parse_dim(next_token(in, path), path, "width");
    const int h = parse_dim(next_token(in, path), path, "height");
    const int maxval = parse_dim(next_token(in, path), path, "maxval");
    if (maxval != 255) {
        throw DataError(path + ": unsupported maxval " +
                        std::to_string(maxval));
    }
    // Exactly one whitespace byte separates the header from the payload;
    // next_token already consumed it.

    const std::size_t pixels = static_cast<std::size_t>(w) * h;
    const std::size_t bytes = expect_color ? pixels * 3 : pixels;
    std::vector<unsigned char> buf(bytes);
    in.read(reinterpret_cast<char*>(buf.data()),
            static_cast<std::streamsize>(bytes));
    if (static_cast<std::size_t>(in.gcount()) != bytes) {
        throw DataError(path + ": truncated pixel data");
    }

    ColorImage img(w, h);
    if (expect_color) {
        for (std::size_t p = 0; p < pixels; ++p) {
            img.r[p] = buf[3 * p];
            img.g[p] = buf[3 * p + 1];
            img.b[p] = buf[3 * p + 2];
        }
    } else {
        for (std::size_t p = 0; p < pixels; ++p) {
            img.r[p] = img.g[p] = img.b[p] = buf[p];
        }
    }
    return img;
}

unsigned char quantize(double v) {
    const double rounded = std::round(v);
    if (rounded <= 0.0) {
        return 0;
    }
    if (rounded >= 255.0) {
        return 255;
    }
    return static_cast<unsigned char>(rounded);
}

}  // namespace

ColorImage read_ppm(const std::string& path) {
    return read_netpbm(path, true);
}

ColorImage read_pgm(const std::string& path) {
    return read_netpbm(path, false);
}

ColorImage read_image(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError(path + ": cannot open");
    }
    char m[2] = {0, 0};
    in.read(m, 2);
    in.close();
    if (m[0] == 'P' && m[1] == '6') {
        return read_ppm(path);
    }
    if (m[0] == 'P' && m[1] == '5') {
        return read_pgm(path);
    }
    throw DataError(path + ": not a P6/P5 netpbm file");
}

void write_ppm(const std::string& path, const ColorImage& img) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw DataError(path + ": cannot open for writing");
    }
    out << "P6\n" << img.width << ' ' << img.height << "\n255\n";
    const std::size_t pixels =
        static_cast<std::size_t>(img.width) * img.height;
    std::vector<unsigned char> buf(pixels * 3);
    for (std::size_t p = 0; p < pixels; ++p) {
        buf[3 * p] = quantize(img.r[p]);
        buf[3 * p + 1] = quantize(img.g[p]);
        buf[3 * p + 2] = quantize(img.b[p]);
    }
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(buf.size()));
    if (!out) {
        throw DataError(path + ": write failed");
    }
}

QMatrix to_qmatrix(const ColorImage& img) {
    QMatrix m(img.height, img.width);
    for (int row = 0; row < img.height; ++row) {
        for (int col = 0; col < img.width; ++col) {
            const std::size_t p = img.index(row, col);
            m.set(row, col, Quaternion{0.0, img.r[p], img.g[p], img.b[p]});
        }
    }
    return m;
}

ColorImage from_qmatrix(const QMatrix& m) {
    ColorImage img(m.cols(), m.rows());
    for (int row = 0; row < m.rows(); ++row) {
        for (int col = 0; col < m.cols(); ++col) {
            const Quaternion q = m(row, col);
            const std::size_t p = img.index(row, col);
            img.r[p] = q.x;
            img.g[p] = q.y;
            img.b[p] = q.z;
        }
    }
    return img;
}

Eigen::MatrixXd to_grayscale(const ColorImage& img) {
    Eigen::MatrixXd gray(img.height, img.width);
    for (int row = 0; row < img.height; ++row) {
        for (int col = 0; col < img.width; ++col) {
            const std::size_t p = img.index(row, col);
            gray(row, col) =
                0.299 * img.r[p] + 0.587 * img.g[p] + 0.114 * img.b[p];
        }
    }
    return gray;
}

Eigen::MatrixXd to_grayscale(const QMatrix& m) {
    Eigen::MatrixXd gray(m.rows(), m.cols());
    for (int row = 0; row < m.rows(); ++row) {
        for (int col = 0; col < m.cols(); ++col) {
            const Quaternion q = m(row, col);
            gray(row, col) = 0.299 * q.x + 0.587 * q.y + 0.114 * q.z;
        }
    }
    return gray;
}

}  // namespace qface

#ifndef QFACE_IMAGE_HPP
#define QFACE_IMAGE_HPP

#include <Eigen/Core>

#include <string>
#include <vector>

#include "qface/qmatrix.hpp"

namespace qface {

/// RGB raster with double-precision channels. File I/O produces values in
/// [0, 255]; computed images (reconstructions) may exceed that range and are
/// clamped only when written back to disk.
struct ColorImage {
    int width = 0;
    int height = 0;
    std::vector<double> r, g, b;  // row-major, height * width each

    ColorImage() = default;
    ColorImage(int w, int h)
        : width(w),
          height(h),
          r(static_cast<std::size_t>(w) * h, 0.0),
          g(static_cast<std::size_t>(w) * h, 0.0),
          b(static_cast<std::size_t>(w) * h, 0.0) {}

    std::size_t index(int row, int col) const {
        return static_cast<std::size_t>(row) * width + col;
    }
};

/// Binary PPM (P6) reader, maxval 255 required. Throws DataError on bad
/// magic, malformed header, unsupported maxval, or truncated payload.
ColorImage read_ppm(const std::string& path);

/// Binary PGM (P5) reader, maxval 255 required; the gray value is replicated
/// into all three channels.
ColorImage read_pgm(const std::string& path);

/// Reads P6 or P5 by magic number.
ColorImage read_image(const std::string& path);

/// Canonical P6 writer: header "P6\n<w> <h>\n255\n" followed by binary
/// pixels. Channels are rounded half away from zero and clamped to [0, 255]
/// here and nowhere else.
void write_ppm(const std::string& path, const ColorImage& img);

/// Pure-quaternion encoding of an image: entry (row, col) is
/// R i + G j + B k with zero real part. Shape is height x width.
QMatrix to_qmatrix(const ColorImage& img);

/// Inverse of to_qmatrix: channels from the i, j, k planes. The real plane
/// is dropped; reconstructions keep a tiny real residue that carries no
/// color information.
ColorImage from_qmatrix(const QMatrix& m);

/// BT.601 luma 0.299 R + 0.587 G + 0.114 B, height x width.
Eigen::MatrixXd to_grayscale(const ColorImage& img);

/// Same conversion straight from the pure-quaternion encoding (channels in
/// the i, j, k planes).
Eigen::MatrixXd to_grayscale(const QMatrix& m);

}  // namespace qface

#endif  // QFACE_IMAGE_HPP

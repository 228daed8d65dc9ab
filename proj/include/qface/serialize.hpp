#ifndef QFACE_SERIALIZE_HPP
#define QFACE_SERIALIZE_HPP

#include <span>
#include <string>
#include <vector>

#include "qface/model.hpp"
#include "qface/qmatrix.hpp"
#include "qface/recognize.hpp"

namespace qface {

/// On-disk model: a JSON header (mode, dims, r, labels, W, diag(D)) followed
/// by raw little-endian f64 planes for the mean and the basis. One container
/// serves all three modes; the grayscale baseline stores its real values in
/// the scalar plane and zeros elsewhere. Round-trips are bit-exact.
struct ModelArchive {
    std::string mode;  // sr-2dcpca | 2dcpca | 2dpca
    int rows = 0;
    int cols = 0;
    int r = 0;
    std::vector<std::string> labels;
    std::vector<double> w;
    std::vector<double> d;
    QMatrix mean;   // rows x cols
    QMatrix basis;  // cols x r
};

/// Writes atomically (temp file + rename). Throws DataError on I/O failure.
void save_model(const std::string& path, const ModelArchive& m);

/// Throws DataError on missing file, bad magic, or truncation.
ModelArchive load_model(const std::string& path);

ModelArchive to_archive(const EigenfaceModel& m);

/// Rebuilds a quaternion model; rejects grayscale archives.
EigenfaceModel model_from_archive(const ModelArchive& a);

/// Gallery archive: JSON header (count, feature dims, labels, sources)
/// plus per-entry f64 planes.
void save_gallery(const std::string& path,
                  std::span<const FeatureMatrix> gallery);
std::vector<FeatureMatrix> load_gallery(const std::string& path);

}  // namespace qface

#endif  // QFACE_SERIALIZE_HPP

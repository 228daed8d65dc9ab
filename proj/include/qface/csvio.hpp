#ifndef QFACE_CSVIO_HPP
#define QFACE_CSVIO_HPP

#include <string>

namespace qface {

/// Shortest round-trip decimal form of v (locale-independent), the one
/// float format used in CSV output so identical runs emit identical bytes.
std::string format_double(double v);

/// Writes content to path via a temp file + rename so readers never see a
/// partial file. Throws DataError on failure.
void write_text_atomic(const std::string& path, const std::string& content);

}  // namespace qface

#endif  // QFACE_CSVIO_HPP

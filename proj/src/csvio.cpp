#include "qface/csvio.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <system_error>

#include "qface/errors.hpp"

namespace qface {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void write_text_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw DataError(tmp + ": cannot open for writing");
        }
        out.write(content.data(),
                  static_cast<std::streamsize>(content.size()));
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

}  // namespace qface

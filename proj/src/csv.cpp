#include "abmx/csv.hpp"

#include <cstdio>
#include <fstream>

#include "abmx/errors.hpp"

namespace abmx {

std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string trajectory_to_csv(const Trajectory& t) {
    std::string out;
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        if (i)
            out += ',';
        out += t.columns[i];
    }
    out += '\n';
    for (const auto& row : t.rows) {
        out += std::to_string(row.step);
        out += ',';
        out += std::to_string(row.replica);
        for (const double v : row.values) {
            out += ',';
            out += format_real(v);
        }
        out += '\n';
    }
    return out;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f)
            throw Error("cannot open output file: " + tmp);
        f.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!f) {
            f.close();
            std::remove(tmp.c_str());
            throw Error("write failed: " + tmp);
        }
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw Error("cannot move output into place: " + path);
    }
}

} // namespace abmx

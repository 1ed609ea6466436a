#include <cstdio>
#include <fstream>
#include <system_error>

#include "ruledlab/cli.hpp"
#include "ruledlab/error.hpp"

namespace ruledlab::cli {

namespace {

void put(std::string& out, double x) {
    if (x == 0.0) x = 0.0;  // no "-0"
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    out += buf;
}

}  // namespace

std::string obj_text(const std::vector<Vec3>& grid, std::size_t ns, std::size_t nv) {
    if (ns < 2 || nv < 2) throw Error(ErrorCode::InvalidArgument, "mesh grid must be at least 2x2");
    if (grid.size() != ns * nv) throw Error(ErrorCode::InvalidArgument, "grid size does not match ns x nv");
    std::string out;
    out.reserve(grid.size() * 64 + (ns - 1) * (nv - 1) * 32);
    for (const Vec3& p : grid) {
        if (!p.finite()) throw Error(ErrorCode::InvalidArgument, "mesh vertex is not finite");
        out += "v ";
        put(out, p.x1);
        out += ' ';
        put(out, p.x2);
        out += ' ';
        put(out, p.x3);
        out += '\n';
    }
    for (std::size_t i = 0; i + 1 < ns; ++i) {
        for (std::size_t j = 0; j + 1 < nv; ++j) {
            const std::size_t a = i * nv + j + 1;
            const std::size_t b = (i + 1) * nv + j + 1;
            out += "f " + std::to_string(a) + ' ' + std::to_string(b) + ' ' + std::to_string(b + 1) + ' ' +
                   std::to_string(a + 1) + '\n';
        }
    }
    return out;
}

void export_obj(const std::vector<Vec3>& grid, std::size_t ns, std::size_t nv, const std::filesystem::path& path) {
    write_atomic(path, obj_text(grid, ns, nv));
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error(tmp.string() + ": cannot open for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) throw std::runtime_error(tmp.string() + ": write failed");
    }
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw std::runtime_error(path.string() + ": cannot move output into place");
    }
}

}  // namespace ruledlab::cli

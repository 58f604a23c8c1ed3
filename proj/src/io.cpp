#include "nlfb/io.hpp"

#include "nlfb/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>
#include <unistd.h>

namespace nlfb {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path(), ec);
        if (ec) {
            throw Error(ErrorKind::Io, "cannot create directory " + path.parent_path().string() +
                                           ": " + ec.message());
        }
    }
    fs::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            out.close();
            fs::remove(tmp, ec);
            throw Error(ErrorKind::Io, "cannot write " + tmp.string());
        }
    }
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw Error(ErrorKind::Io, "cannot rename into " + path.string());
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string trajectory_csv(const Trajectory& traj) {
    std::string out = "t,g,h,gdot,hdot,sup_u,sup_v,u_center,v_center\n";
    for (const auto& s : traj.samples) {
        for (double v : {s.t, s.g, s.h, s.gdot, s.hdot, s.sup_u, s.sup_v, s.u_center}) {
            out += format_double(v);
            out += ',';
        }
        out += format_double(s.v_center);
        out += '\n';
    }
    return out;
}

std::string snapshots_csv(const Trajectory& traj) {
    std::string out = "t,i,x,u,v\n";
    for (const State& s : traj.snapshots) {
        const std::string t = format_double(s.t);
        for (int i = 0; i <= s.intervals(); ++i) {
            const auto k = static_cast<std::size_t>(i);
            out += t + ',' + std::to_string(i) + ',' + format_double(s.x_at(i)) + ',' +
                   format_double(s.w[k]) + ',' + format_double(s.z[k]) + '\n';
        }
    }
    return out;
}

std::string phase_table_csv(const PhaseTable& table) {
    std::string out =
        "a,d1,d2,h0,mu,rho,kind,verdict,certificate,final_length,sup_u,sup_v,lambda_p_final\n";
    for (const PhaseRow& r : table.rows) {
        for (double v : {r.a, r.d1, r.d2, r.h0, r.mu, r.rho}) {
            out += format_double(v);
            out += ',';
        }
        out += std::string(to_string(r.kind)) + ',';
        out += std::string(to_string(r.verdict)) + ',';
        out += std::string(to_string(r.certificate)) + ',';
        out += format_double(r.final_length) + ',' + format_double(r.sup_u) + ',' +
               format_double(r.sup_v) + ',' + format_double(r.lambda_p_final) + '\n';
    }
    return out;
}

}  // namespace nlfb

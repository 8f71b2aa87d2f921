#include "rst/io.hpp"

#include <array>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>

namespace rst {
namespace {

constexpr char kMagic[5] = {'R', 'S', 'T', 'F', '1'};

void put_u32(std::ofstream& out, std::uint32_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint32_t get_u32(std::ifstream& in) {
    std::uint32_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    require(in.good(), "RSTF1: truncated header");
    return v;
}

} // namespace

void write_rstf(const std::string& path, const CanonicalTensor& t) {
    std::ofstream out(path, std::ios::binary);
    require(out.good(), "cannot write " + path);
    out.write(kMagic, sizeof kMagic);
    put_u32(out, static_cast<std::uint32_t>(t.order()));
    put_u32(out, static_cast<std::uint32_t>(t.rank()));
    for (int d : t.dims()) put_u32(out, static_cast<std::uint32_t>(d));
    out.write(reinterpret_cast<const char*>(t.weights().data()),
              static_cast<std::streamsize>(sizeof(double)) * t.rank());
    for (int l = 0; l < t.order(); ++l)
        out.write(reinterpret_cast<const char*>(t.mode(l).data()),
                  static_cast<std::streamsize>(sizeof(double)) * t.mode(l).size());
    require(out.good(), "short write to " + path);
}

CanonicalTensor read_rstf(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), "cannot open " + path);
    char magic[5];
    in.read(magic, sizeof magic);
    require(in.good() && std::memcmp(magic, kMagic, sizeof kMagic) == 0,
            "not an RSTF1 file: " + path);
    const int d = static_cast<int>(get_u32(in));
    const int R = static_cast<int>(get_u32(in));
    require(d >= 1 && d <= 16, "RSTF1: implausible order");
    std::vector<int> dims(d);
    for (int l = 0; l < d; ++l) dims[l] = static_cast<int>(get_u32(in));

    Eigen::VectorXd w(R);
    in.read(reinterpret_cast<char*>(w.data()),
            static_cast<std::streamsize>(sizeof(double)) * R);
    std::vector<Eigen::MatrixXd> modes(d);
    for (int l = 0; l < d; ++l) {
        modes[l].resize(dims[l], R);
        in.read(reinterpret_cast<char*>(modes[l].data()),
                static_cast<std::streamsize>(sizeof(double)) * modes[l].size());
    }
    require(in.good(), "RSTF1: truncated payload in " + path);
    return CanonicalTensor(dims, std::move(w), std::move(modes));
}

void write_mode_profile_csv(const std::string& path, const CanonicalTensor& t,
                            const GridSpec& grid, int mode) {
    require(mode >= 0 && mode < t.order(), "mode profile: mode out of range");
    std::ofstream out(path);
    require(out.good(), "cannot write " + path);
    out << "index,coord";
    for (int k = 0; k < t.rank(); ++k) out << ",term_" << k;
    out << "\n";
    char buf[64];
    for (int i = 0; i < t.dims()[mode]; ++i) {
        std::snprintf(buf, sizeof buf, "%d,%.17g", i, grid.coord(i));
        out << buf;
        for (int k = 0; k < t.rank(); ++k) {
            std::snprintf(buf, sizeof buf, ",%.17g", t.mode(mode)(i, k));
            out << buf;
        }
        out << "\n";
    }
}

void write_spectra_csv(const std::string& path, const std::vector<ModeSpectrum>& spectra) {
    std::ofstream out(path);
    require(out.good(), "cannot write " + path);
    out << "mode,index,value\n";
    char buf[64];
    for (const auto& s : spectra)
        for (int i = 0; i < s.singular_values.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%d,%d,%.17g\n", s.mode, i,
                          s.singular_values[i]);
            out << buf;
        }
}

void write_cross_section_csv(const std::string& path, const CanonicalTensor& t,
                             const GridSpec& grid, int z_index, double scale) {
    require(t.order() == 3, "cross section: 3D only");
    require(z_index >= 0 && z_index < t.dims()[2], "cross section: plane out of range");
    std::ofstream out(path);
    require(out.good(), "cannot write " + path);
    out << "x,y,value\n";
    const int nx = t.dims()[0], ny = t.dims()[1];
    // lazy evaluation from the mode vectors: row = weights * (u1_i u2_j u3_z)
    Eigen::VectorXd wz(t.rank());
    for (int k = 0; k < t.rank(); ++k)
        wz[k] = t.weights()[k] * t.mode(2)(z_index, k);
    char buf[96];
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            double v = 0.0;
            for (int k = 0; k < t.rank(); ++k)
                v += wz[k] * t.mode(0)(i, k) * t.mode(1)(j, k);
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", grid.coord(i),
                          grid.coord(j), v * scale);
            out << buf;
        }
    }
}

void write_forces_csv(const std::string& path,
                      const std::vector<std::array<double, 3>>& forces) {
    std::ofstream out(path);
    require(out.good(), "cannot write " + path);
    out << "index,Fx,Fy,Fz\n";
    char buf[128];
    for (std::size_t i = 0; i < forces.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g\n", i, forces[i][0],
                      forces[i][1], forces[i][2]);
        out << buf;
    }
}

std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), "cannot open config file: " + path);
    std::vector<std::pair<std::string, std::string>> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        auto eq = line.find('=');
        require(eq != std::string::npos,
                "config line " + std::to_string(lineno) + ": expected key=value");
        auto strip = [](std::string s) {
            auto b = s.find_first_not_of(" \t\r");
            auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        kv.emplace_back(strip(line.substr(0, eq)), strip(line.substr(eq + 1)));
    }
    return kv;
}

} // namespace rst

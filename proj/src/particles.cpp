#include "rst/particles.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

namespace rst {
namespace {

double distance(const std::array<double, 3>& a, const std::array<double, 3>& b) {
    const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

} // namespace

ParticleSystem make_particle_system(const GridSpec& grid,
                                    const std::vector<std::array<double, 3>>& centers,
                                    const std::vector<double>& charges) {
    require(centers.size() == charges.size(), "particle system: size mismatch");
    ParticleSystem sys;
    sys.grid = grid;
    sys.charges = charges;
    const double h = grid.h();
    const double half = 0.5 * grid.b;

    for (const auto& c : centers) {
        std::array<int, 3> cell;
        std::array<double, 3> snapped;
        double disp2 = 0.0;
        for (int l = 0; l < 3; ++l) {
            require(std::abs(c[l]) <= half + 1e-12,
                    "particle outside the box [-b/2, b/2]^3");
            int i = static_cast<int>(std::floor((c[l] + grid.b) / h));
            i = std::min(std::max(i, 0), grid.n - 1);
            cell[l] = i;
            snapped[l] = grid.coord(i);
            disp2 += (snapped[l] - c[l]) * (snapped[l] - c[l]);
        }
        sys.cells.push_back(cell);
        sys.positions.push_back(snapped);
        sys.max_snap = std::max(sys.max_snap, std::sqrt(disp2));
    }

    double minsep = 0.0;
    for (std::size_t i = 0; i < sys.positions.size(); ++i)
        for (std::size_t j = 0; j < i; ++j) {
            const double r = distance(sys.positions[i], sys.positions[j]);
            minsep = (minsep == 0.0) ? r : std::min(minsep, r);
        }
    sys.min_separation = minsep;
    return sys;
}

ParticleSystem parse_particles(const std::string& path, const GridSpec& grid) {
    std::ifstream in(path);
    require(in.good(), "cannot open particle file: " + path);
    std::vector<std::array<double, 3>> centers;
    std::vector<double> charges;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        double x, y, z, q;
        if (!(ls >> x)) continue;   // blank line
        if (!(ls >> y >> z >> q))
            throw InputError("malformed particle line " + std::to_string(lineno) +
                             " in " + path);
        std::string rest;
        if (ls >> rest)
            throw InputError("trailing tokens on particle line " +
                             std::to_string(lineno) + " in " + path);
        centers.push_back({x, y, z});
        charges.push_back(q);
    }
    return make_particle_system(grid, centers, charges);
}

void write_particles(const std::string& path, const ParticleSystem& sys) {
    std::ofstream out(path);
    require(out.good(), "cannot write particle file: " + path);
    char buf[128];
    for (int i = 0; i < sys.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g %.17g\n", sys.positions[i][0],
                      sys.positions[i][1], sys.positions[i][2], sys.charges[i]);
        out << buf;
    }
}

ParticleSystem random_particles(const GridSpec& grid, int count, double min_sep,
                                double q_lo, double q_hi, std::uint64_t seed) {
    require(count >= 0, "random_particles: negative count");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> pos(-0.5 * grid.b, 0.5 * grid.b);
    std::uniform_real_distribution<double> chg(q_lo, q_hi);

    std::vector<std::array<double, 3>> centers;
    std::vector<double> charges;
    const double h = grid.h();
    int attempts = 0;
    while (static_cast<int>(centers.size()) < count) {
        if (++attempts > 100000 * (count + 1))
            throw NumericalError("random_particles: min separation unreachable");
        std::array<double, 3> c = {pos(rng), pos(rng), pos(rng)};
        // snap first so the separation constraint holds after snapping
        for (int l = 0; l < 3; ++l) {
            int i = static_cast<int>(std::floor((c[l] + grid.b) / h));
            i = std::min(std::max(i, 0), grid.n - 1);
            c[l] = grid.coord(i);
        }
        bool ok = std::abs(c[0]) <= 0.5 * grid.b && std::abs(c[1]) <= 0.5 * grid.b &&
                  std::abs(c[2]) <= 0.5 * grid.b;
        for (std::size_t j = 0; ok && j < centers.size(); ++j)
            ok = distance(c, centers[j]) >= min_sep;
        if (!ok) continue;
        centers.push_back(c);
        charges.push_back(chg(rng));
    }
    return make_particle_system(grid, centers, charges);
}

} // namespace rst

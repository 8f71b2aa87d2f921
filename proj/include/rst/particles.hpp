#pragma once

#include <array>
#include <string>
#include <vector>

#include "rst/grid.hpp"

namespace rst {

/// Many-particle system snapped to cell centers of the computational grid.
/// Raw centers must lie inside [-b/2, b/2]^3; the snap displacement and the
/// minimum pairwise separation are recorded.
struct ParticleSystem {
    GridSpec grid;
    std::vector<std::array<double, 3>> positions;  // snapped, cell centers
    std::vector<std::array<int, 3>> cells;         // snapped cell indices
    std::vector<double> charges;
    double max_snap = 0.0;
    double min_separation = 0.0;   // 0 for N < 2

    int size() const { return static_cast<int>(charges.size()); }
};

ParticleSystem make_particle_system(const GridSpec& grid,
                                    const std::vector<std::array<double, 3>>& centers,
                                    const std::vector<double>& charges);

/// Plain text, one particle per line: "x y z q"; '#' starts a comment.
ParticleSystem parse_particles(const std::string& path, const GridSpec& grid);
void write_particles(const std::string& path, const ParticleSystem& sys);

/// Seeded dart throwing inside [-b/2, b/2]^3 with a minimum separation;
/// charges uniform in [q_lo, q_hi].
ParticleSystem random_particles(const GridSpec& grid, int count, double min_sep,
                                double q_lo, double q_hi, std::uint64_t seed);

} // namespace rst

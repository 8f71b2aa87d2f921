#pragma once

#include <string>
#include <vector>

#include "rst/canonical.hpp"
#include "rst/grid.hpp"
#include "rst/tucker.hpp"

namespace rst {

/// Binary tensor container: magic "RSTF1", u32 d, u32 R, u32 n per mode,
/// f64 weights[R], then per-mode data column-major (vector k contiguous).
/// Native little-endian layout.
void write_rstf(const std::string& path, const CanonicalTensor& t);
CanonicalTensor read_rstf(const std::string& path);

/// 1D mode-vector profiles: "index,coord,term_0,...,term_{R-1}".
void write_mode_profile_csv(const std::string& path, const CanonicalTensor& t,
                            const GridSpec& grid, int mode);

/// Singular-value spectra rows: "mode,index,value".
void write_spectra_csv(const std::string& path, const std::vector<ModeSpectrum>& spectra);

/// Cross-section at a fixed z cell: "x,y,value", evaluated lazily.
void write_cross_section_csv(const std::string& path, const CanonicalTensor& t,
                             const GridSpec& grid, int z_index, double scale = 1.0);

/// Per-particle force table: "index,Fx,Fy,Fz".
void write_forces_csv(const std::string& path,
                      const std::vector<std::array<double, 3>>& forces);

/// Line-based key=value config files; later keys win.
std::vector<std::pair<std::string, std::string>> read_config(const std::string& path);

} // namespace rst

#ifndef ONSAGER_IO_HPP
#define ONSAGER_IO_HPP

#include <string>
#include <vector>

#include "onsager/diagnostics.hpp"
#include "onsager/models.hpp"

namespace onsager {

/// CSV with columns step,time,energy,dissipation_over_tau,kkt_residual,
/// constraint_residual,inner_iterations,mass_1..mass_s,min_1..min_s,
/// max_1..max_s. Reals are written with 17 significant digits so files are
/// byte-reproducible.
void write_series(const std::vector<DiagnosticsRow>& rows,
                  const std::string& path);

/// CSV snapshot: header lines "# dim", "# n_per_axis", "# h", "# components",
/// then one row per cell (axis indices, then component values).
void write_snapshot(const SystemState& state, const std::string& path);

/// Reads a snapshot written by write_snapshot, validating dim, n, and h
/// against the expected grid; round trips bit-identically.
SystemState read_snapshot(const std::string& path, const PeriodicGrid& grid);

/// 17-significant-digit decimal text for a double (lossless round trip).
std::string format_real(double x);

}  // namespace onsager

#endif

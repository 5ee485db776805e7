#ifndef ONSAGER_RUN_HPP
#define ONSAGER_RUN_HPP

#include <string>
#include <vector>

#include "onsager/config.hpp"
#include "onsager/diagnostics.hpp"

namespace onsager {

struct OutputBundle {
  std::string series_path;
  std::vector<std::string> snapshot_paths;
  std::string manifest_path;
  bool failed = false;
  int failed_step = -1;        // 1-based step that raised the failure
  std::string failure_message;
};

/// Drives `steps` calls to advance, writing the diagnostics series, state
/// snapshots at the configured cadence (snapshot_every == 0 means final
/// only), and a manifest that is created before the run starts and finalized
/// afterwards. Solver failures abort the run early, leaving partial outputs
/// and a failure record in the manifest.
OutputBundle run_simulation(const RunConfig& config);

}  // namespace onsager

#endif

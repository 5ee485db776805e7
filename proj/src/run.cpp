#include "onsager/run.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>

#include "onsager/initial_conditions.hpp"
#include "onsager/io.hpp"
#include "onsager/step.hpp"

namespace onsager {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

json tolerance_record(const OptimizerConfig& solver) {
  return json{{"constraint_residual", kConstraintTolerance},
              {"energy_inequality_slack", kEnergyInequalitySlack},
              {"kkt_tolerance", solver.kkt_tolerance},
              {"linear_tolerance", solver.linear_tolerance}};
}

void write_manifest(const std::string& path, const json& manifest) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open manifest '" + path + "'");
  out << manifest.dump(2) << "\n";
  if (!out) throw IoError("failed while writing '" + path + "'");
}

std::string snapshot_name(const std::string& prefix, int step) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "_step%06d.csv", step);
  return prefix + buf;
}

}  // namespace

OutputBundle run_simulation(const RunConfig& config) {
  fs::path dir(config.output_directory);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "'");
  const std::string prefix = (dir / config.label).string();

  OutputBundle bundle;
  bundle.manifest_path = prefix + "_manifest.json";
  bundle.series_path = prefix + "_series.csv";

  json manifest;
  manifest["version"] = "0.1.0";
  manifest["status"] = "running";
  manifest["config"] = config.resolved;
  manifest["tolerances"] = tolerance_record(config.solver);
  write_manifest(bundle.manifest_path, manifest);

  SystemState state;
  if (config.initial.contains("file")) {
    state = read_snapshot(config.initial.at("file").get<std::string>(),
                          config.grid);
    validate_state(config.model, state);
  } else {
    state = builtin_initial_condition(
        config.initial.at("name").get<std::string>(),
        config.initial.value("params", json::object()), config.grid,
        config.model);
  }

  std::vector<DiagnosticsRow> rows;
  rows.reserve(config.steps);
  for (int step = 1; step <= config.steps; ++step) {
    try {
      StepProblem problem(config.model, state, config.tau, config.grid);
      StepResult result = advance(problem, config.solver);
      state = result.state;
      rows.push_back(make_row(step, step * config.tau, result, config.tau));
    } catch (const Error& e) {
      bundle.failed = true;
      bundle.failed_step = step;
      bundle.failure_message = e.what();
      break;
    }
    if (config.snapshot_every > 0 && step % config.snapshot_every == 0) {
      const std::string path = snapshot_name(prefix, step);
      write_snapshot(state, path);
      bundle.snapshot_paths.push_back(path);
    }
  }

  write_series(rows, bundle.series_path);
  const std::string final_path = prefix + "_final.csv";
  write_snapshot(state, final_path);
  bundle.snapshot_paths.push_back(final_path);

  if (bundle.failed) {
    manifest["status"] = "failed";
    manifest["failure"] = {{"step", bundle.failed_step},
                           {"error", bundle.failure_message}};
  } else {
    manifest["status"] = "completed";
    manifest["steps_completed"] = config.steps;
  }
  write_manifest(bundle.manifest_path, manifest);
  return bundle;
}

}  // namespace onsager

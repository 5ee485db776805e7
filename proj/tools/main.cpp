// Batch driver: validate a run configuration, execute the time stepper, and
// write diagnostics series, snapshots, and a manifest.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "onsager/run.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitSolver = 3;
constexpr int kExitIo = 4;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw onsager::IoError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

onsager::RunConfig load(const std::string& path) {
  return onsager::parse_config(read_file(path));
}

int run_command(const std::string& config_path, const std::string& output_dir,
                const std::string& label) {
  onsager::RunConfig config = load(config_path);
  if (!output_dir.empty()) {
    config.output_directory = output_dir;
    config.resolved["output"]["directory"] = output_dir;
  }
  if (!label.empty()) {
    config.label = label;
    config.resolved["output"]["label"] = label;
  }
  onsager::OutputBundle bundle = onsager::run_simulation(config);
  if (bundle.failed) {
    std::cerr << "solver failure at step " << bundle.failed_step << ": "
              << bundle.failure_message << "\n";
    std::cerr << "partial outputs in " << bundle.series_path << "\n";
    return kExitSolver;
  }
  std::cout << "completed " << config.steps << " steps\n";
  std::cout << "series:   " << bundle.series_path << "\n";
  std::cout << "manifest: " << bundle.manifest_path << "\n";
  for (const std::string& s : bundle.snapshot_paths)
    std::cout << "snapshot: " << s << "\n";
  return kExitOk;
}

int check_command(const std::string& config_path) {
  onsager::RunConfig config = load(config_path);
  std::cout << "config ok: " << onsager::model_name(config.model) << ", dim "
            << config.grid.dim << ", n " << config.grid.n << ", "
            << config.steps << " steps at tau " << config.tau << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Onsager-principle time stepping for dissipative gradient flows"};
  app.require_subcommand(1);

  std::string config_path, output_dir, label;

  CLI::App* run = app.add_subcommand("run", "execute a run configuration");
  run->add_option("config", config_path, "JSON run configuration")->required();
  run->add_option("--output", output_dir, "override the output directory");
  run->add_option("--seed-label", label, "override the run label");

  CLI::App* check = app.add_subcommand("check", "validate a configuration");
  check->add_option("config", config_path, "JSON run configuration")->required();

  CLI::App* describe =
      app.add_subcommand("describe-models", "list model schemas as JSON");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return run_command(config_path, output_dir, label);
    if (check->parsed()) return check_command(config_path);
    if (describe->parsed()) {
      std::cout << onsager::describe_models().dump(2) << "\n";
      return kExitOk;
    }
  } catch (const onsager::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const onsager::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kExitValidation;
  } catch (const onsager::UnknownProfile& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const onsager::DomainViolation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const onsager::NoConvergence& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kExitSolver;
  } catch (const onsager::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pnph/app.hpp"
#include "pnph/errors.hpp"

namespace pnph {

int cli_main(int argc, char** argv) {
  CLI::App app{"pnph - homogenized Poisson-Nernst-Planck toolkit for charged porous media"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  CLI::App* run = app.add_subcommand("run", "execute a run config");
  run->add_option("config", config_path, "JSON run configuration")->required();
  run->add_option("--out", out_dir, "override the output directory");

  std::string validate_path;
  CLI::App* validate = app.add_subcommand("validate", "check a run config");
  validate->add_option("config", validate_path, "JSON run configuration")->required();

  CLI::App* presets = app.add_subcommand("presets", "list geometry presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) {
      RunConfig cfg = parse_config_file(config_path);
      if (!out_dir.empty()) cfg.out_dir = out_dir;
      run_config(cfg);
      std::cout << "wrote artifacts to " << cfg.out_dir << "\n";
      return 0;
    }
    if (validate->parsed()) {
      parse_config_file(validate_path);
      std::cout << "config ok\n";
      return 0;
    }
    if (presets->parsed()) {
      for (const std::string& name : preset_names()) std::cout << name << "\n";
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const RegimeError& e) {
    std::cerr << "regime error: " << e.what() << "\n";
    return 4;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

} // namespace pnph

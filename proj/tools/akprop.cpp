#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "akprop/kernels.hpp"
#include "akprop/scenario.hpp"

namespace {

using nlohmann::json;

std::string resolve_preset(const std::string& name) {
  std::vector<std::string> dirs;
  if (const char* env = std::getenv("AKPROP_PRESET_DIR")) dirs.push_back(env);
#ifdef AKPROP_PRESET_DIR
  dirs.push_back(AKPROP_PRESET_DIR);
#endif
  dirs.push_back("presets");
  for (const auto& dir : dirs) {
    std::string path = dir + "/" + name + ".json";
    if (std::filesystem::exists(path)) return path;
  }
  throw akprop::config_error("preset not found: " + name);
}

json load_config(const std::string& config, const std::string& preset) {
  std::string path = config;
  if (path.empty() && !preset.empty()) path = resolve_preset(preset);
  if (path.empty())
    throw akprop::config_error("either --config or --preset is required");
  std::ifstream in(path);
  if (!in) throw akprop::config_error("cannot open config: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return json::parse(ss.str());
  } catch (const json::exception& e) {
    throw akprop::config_error(std::string("config parse failure: ") + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral propagator engine for finite-rank perturbations"};
  app.require_subcommand(1);

  std::string config, preset, out_dir;
  double override_t = 0.0, override_lambda = 0.0;
  std::string override_branch;
  bool has_t = false, has_lambda = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config, "scenario configuration (JSON)");
    cmd->add_option("--preset", preset, "named preset from the presets directory");
    cmd->add_option("--out", out_dir, "output directory override");
    cmd->add_option("--t", override_t, "single evaluation time override")
        ->each([&](const std::string&) { has_t = true; });
    cmd->add_option("--lambda", override_lambda, "single lambda override")
        ->each([&](const std::string&) { has_lambda = true; });
    cmd->add_option("--branch", override_branch, "branch override (plus/minus)");
  };

  add_common(app.add_subcommand("run", "run a scenario configuration"));
  for (const char* name : {"borel-scan", "spectral-check", "propagate",
                           "oracle-compare", "decay-fit", "oscillatory-verify",
                           "scaling"}) {
    add_common(app.add_subcommand(name, name));
  }

  auto* keval = app.add_subcommand("kernel-eval", "evaluate a free-resolvent kernel");
  int kd = 1;
  std::string kbranch = "plus";
  double klambda = 1.0, kr = 0.0;
  keval->add_option("--d", kd, "dimension");
  keval->add_option("--branch", kbranch, "plus or minus");
  keval->add_option("--lambda", klambda, "spectral parameter");
  keval->add_option("--r", kr, "separation |x - y|");

  CLI11_PARSE(app, argc, argv);

  try {
    if (keval->parsed()) {
      akprop::SpectralPoint p{kd,
                              kbranch == "minus" ? akprop::Branch::minus
                                                 : akprop::Branch::plus,
                              klambda, kr};
      akprop::cplx v = akprop::free_resolvent_kernel(p);
      std::printf("%.12g%+.12gi\n", v.real(), v.imag());
      return 0;
    }
    std::string chosen = app.get_subcommands().front()->get_name();
    json cfg = load_config(config, preset);
    if (chosen != "run" && cfg.value("experiment", "") != chosen)
      throw akprop::config_error("config experiment does not match subcommand '" +
                                 chosen + "'");
    if (has_t && cfg.contains("reference"))
      cfg["reference"]["t_values"] = json::array({override_t});
    if (has_lambda) cfg["lambda_grid"] = json::array({override_lambda});
    auto outcome = akprop::run_scenario(cfg.dump(), out_dir);
    for (const auto& line : outcome.summary) std::cout << line << "\n";
    for (const auto& f : outcome.files) std::cout << "wrote " << f << "\n";
    return outcome.exit_code;
  } catch (const akprop::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

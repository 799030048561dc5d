#include <chrono>
#include <ctime>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "commands.hpp"
#include "config.hpp"
#include "latbump/parallel.hpp"

using namespace latbump;
using namespace latbump::cli;
using nlohmann::json;

namespace {

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string grid;
  std::optional<int> threads;
};

ExperimentConfig resolve(const Common& c) {
  ExperimentConfig cfg = c.config_path.empty() ? ExperimentConfig{} : load_config(c.config_path);
  if (c.config_path.empty()) cfg.phi = fixture(cfg.phi_name, cfg.dimension);
  if (c.seed) cfg.seed = *c.seed;
  if (!c.out.empty()) cfg.out = c.out;
  if (!c.grid.empty()) std::tie(cfg.L, cfg.s) = parse_grid(c.grid);
  if (c.threads) cfg.threads = *c.threads;
  if (cfg.threads < 0) throw ConfigError("--threads must be >= 0");
  return cfg;
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config_path, "experiment config (JSON)");
  sub->add_option("--seed", c.seed, "seed for every random choice of the run");
  sub->add_option("--out", c.out, "output directory");
  sub->add_option("--grid", c.grid, "grid as L,s");
  sub->add_option("--threads", c.threads, "worker threads, 0 = all cores");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"latbump: lattice bump multipliers, transference and scaling experiments"};
  app.require_subcommand(1);
  Common common;
  double inject_outer = 0.6;

  std::vector<std::pair<std::string, std::string>> cmds{
      {"synth", "sample sigma_{a,Phi}, decompose Phi and compare both assemblies"},
      {"decompose", "tensor Fourier series of Phi with reconstruction table"},
      {"opnorm", "operator norm lower bounds for the continuum operator and its model"},
      {"transfer", "continuum-versus-model ratio report over an a-family"},
      {"scaling", "norm growth slopes of modulated dilations and the necessity verdict"},
      {"selftest", "invariant suite"}};
  for (const auto& [name, help] : cmds) {
    auto* sub = app.add_subcommand(name, help);
    add_common(sub, common);
    if (name == "selftest") sub->add_option("--window-outer", inject_outer, "force the window radius (fault injection)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kConfig;
  }
  const std::string cmd = app.get_subcommands().front()->get_name();

  const auto started = utc_now();
  const auto t0 = std::chrono::steady_clock::now();
  RunResult res;
  std::string out;
  int threads = 0;
  try {
    if (cmd == "selftest") {
      SelftestOptions opt;
      opt.seed = common.seed.value_or(42);
      opt.window_outer = inject_outer;
      opt.threads = common.threads.value_or(0);
      threads = opt.threads;
      out = common.out;
      res = cmd_selftest(opt, out, std::cout);
    } else {
      const auto cfg = resolve(common);
      out = cfg.out;
      threads = cfg.threads;
      if (cmd == "synth") res = cmd_synth(cfg);
      else if (cmd == "decompose") res = cmd_decompose(cfg);
      else if (cmd == "opnorm") res = cmd_opnorm(cfg);
      else if (cmd == "transfer") res = cmd_transfer(cfg);
      else res = cmd_scaling(cfg);
      std::cout << cmd << ": " << (res.code == kPass ? "all assertions passed" : "assertion failure") << ", reports in "
                << out << "\n";
    }
  } catch (const HypothesisError& e) {
    std::cerr << "hypothesis violation: " << e.what() << "\n";
    return kHypothesis;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntime;
  }

  if (!out.empty()) {
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_json(out, "metadata.json",
               {{"command", cmd},
                {"started_utc", started},
                {"finished_utc", utc_now()},
                {"elapsed_seconds", elapsed},
                {"out", out},
                {"threads_requested", threads},
                {"threads_used", resolve_threads(threads)},
                {"hardware_threads", std::thread::hardware_concurrency()},
                {"exit_code", res.code}});
  }
  return res.code;
}

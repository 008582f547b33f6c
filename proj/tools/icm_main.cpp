// icm: terminal entry point.
//
//   icm serve    [--host ADDR] [--port N] [--ui-dir DIR] [--open]
//   icm evaluate (--config FILE | --preset NAME) [--seed S] [--out PATH] [--format json|csv]
//   icm presets
//
// Exit status: 0 success, 1 runtime error, 2 usage error.

#include <pthread.h>
#include <signal.h>
#include <sys/types.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "icm/csv_export.hpp"
#include "icm/engine.hpp"
#include "icm/error.hpp"
#include "icm/serialization.hpp"
#include "icm/service.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

int fail(const std::string& message, int code = kExitRuntime) {
  std::cerr << "icm: " << message << '\n';
  return code;
}

std::string describe(const icm::Error& e) {
  return e.field().empty() ? std::string(e.what()) : e.field() + ": " + e.what();
}

struct ServeOptions {
  std::string host = icm::service::kDefaultHost;
  int port = icm::service::kDefaultPort;
  std::string ui_dir = "ui/dist";
  bool open_browser = false;
};

int run_serve(const ServeOptions& opts) {
  // Route SIGINT/SIGTERM to a dedicated thread; the server's worker threads
  // inherit this mask.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  httplib::Server server;
  icm::service::install_routes(server, {.ui_dir = opts.ui_dir});

  int port = opts.port;
  errno = 0;
  if (port == 0) {
    port = server.bind_to_any_port(opts.host);
    if (port < 0) return fail("cannot listen on " + opts.host + ": " + std::strerror(errno));
  } else if (!server.bind_to_port(opts.host, port)) {
    const std::string reason = errno == EADDRINUSE ? "address in use" : std::strerror(errno);
    return fail("cannot listen on " + opts.host + ":" + std::to_string(port) + ": " + reason);
  }

  const std::string url = "http://" + opts.host + ":" + std::to_string(port) + "/";
  std::cout << "Serving on " << url << std::endl;
  if (opts.open_browser) {
    const std::string cmd = "xdg-open '" + url + "' >/dev/null 2>&1 &";
    if (std::system(cmd.c_str()) != 0) std::cerr << "icm: could not open a browser\n";
  }

  std::thread waiter([&server, signals] {
    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
  });

  const bool clean = server.listen_after_bind();
  // Wake the waiter if the server stopped on its own.
  kill(getpid(), SIGTERM);
  waiter.join();
  return clean ? kExitOk : fail("server terminated unexpectedly");
}

struct EvaluateOptions {
  std::string config_path;
  std::string preset_name;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format = "json";
};

icm::ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file " + path);
  std::stringstream text;
  text << in.rdbuf();
  try {
    return icm::config_from_json(icm::Json::parse(text.str()));
  } catch (const icm::Json::parse_error& e) {
    throw std::runtime_error(path + ": malformed JSON: " + e.what());
  }
}

std::string curve_path(const std::string& out, const char* suffix) {
  std::string stem = out;
  if (stem.size() >= 4 && stem.compare(stem.size() - 4, 4, ".csv") == 0) stem.resize(stem.size() - 4);
  return stem + suffix;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw std::runtime_error("cannot write " + path);
}

int run_evaluate(const EvaluateOptions& opts) {
  if (opts.config_path.empty() == opts.preset_name.empty()) {
    return fail("evaluate: exactly one of --config or --preset is required", kExitUsage);
  }
  if (opts.format == "csv" && opts.out.empty()) {
    return fail("evaluate: --format csv requires --out", kExitUsage);
  }

  icm::ScenarioConfig cfg =
      opts.preset_name.empty() ? load_config(opts.config_path) : icm::preset(opts.preset_name);
  if (opts.seed) cfg.seed = *opts.seed;
  const auto bundle = icm::evaluate_scenario(cfg);

  if (opts.format == "json") {
    const std::string text = icm::to_json(bundle).dump() + "\n";
    if (opts.out.empty()) {
      std::cout << text;
    } else {
      write_file(opts.out, text);
    }
    return kExitOk;
  }

  auto render = [](auto&& writer) {
    std::ostringstream os;
    writer(os);
    return os.str();
  };
  write_file(opts.out, render([&](std::ostream& os) { icm::write_metrics_csv(os, bundle); }));
  write_file(curve_path(opts.out, ".roc.csv"),
             render([&](std::ostream& os) { icm::write_curve_csv(os, bundle.roc); }));
  write_file(curve_path(opts.out, ".pr.csv"),
             render([&](std::ostream& os) { icm::write_curve_csv(os, bundle.pr); }));
  write_file(curve_path(opts.out, ".mccf1.csv"),
             render([&](std::ostream& os) { icm::write_curve_csv(os, bundle.mccf1); }));
  return kExitOk;
}

int run_presets() {
  std::cout << icm::presets_json().dump(2) << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interactive classification metrics: evaluate synthetic score distributions"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(icm::kVersion));

  ServeOptions serve;
  auto* serve_cmd = app.add_subcommand("serve", "Run the local HTTP service");
  serve_cmd->add_option("--host", serve.host, "Address to bind")->capture_default_str();
  serve_cmd->add_option("--port", serve.port, "Port to bind (0 picks a free port)")
      ->envname("ICM_PORT")
      ->check(CLI::Range(0, 65535))
      ->capture_default_str();
  serve_cmd->add_option("--ui-dir", serve.ui_dir, "Static UI bundle served at /")->capture_default_str();
  serve_cmd->add_flag("--open", serve.open_browser, "Open the dashboard in a web browser");

  EvaluateOptions evaluate;
  auto* eval_cmd = app.add_subcommand("evaluate", "Evaluate one scenario and write the results");
  auto* config_opt = eval_cmd->add_option("--config", evaluate.config_path, "Scenario JSON file");
  auto* preset_opt = eval_cmd->add_option("--preset", evaluate.preset_name, "Named preset");
  config_opt->excludes(preset_opt);
  eval_cmd->add_option("--seed", evaluate.seed, "Override the scenario seed");
  eval_cmd->add_option("--out", evaluate.out, "Output path (json defaults to stdout)");
  eval_cmd->add_option("--format", evaluate.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();

  app.add_subcommand("presets", "List the built-in presets as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::string message = e.what();
    std::replace(message.begin(), message.end(), '\n', ' ');
    return fail(message + " (run with --help for usage)", kExitUsage);
  }

  try {
    if (*serve_cmd) return run_serve(serve);
    if (*eval_cmd) return run_evaluate(evaluate);
    return run_presets();
  } catch (const icm::Error& e) {
    return fail(describe(e));
  } catch (const std::exception& e) {
    return fail(e.what());
  }
}

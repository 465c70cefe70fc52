// Stand-in external plant speaking the line protocol, over TCP or stdin/stdout.
#include <chrono>
#include <csignal>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "cli.hpp"
#include "smartskin/mock_plant.hpp"

namespace {
volatile std::sig_atomic_t g_stop = 0;
void on_signal(int) { g_stop = 1; }
}  // namespace

int main(int argc, char** argv) {
  CLI::App app("Mock Smart Skin plant", "mock_plant");
  std::string config = smartskin::cli::default_config_path();
  std::string mode = "surrogate";
  long delay_ms = 0;
  int port = 0;
  bool stdio = false;
  app.add_option("--config", config, "Surrogate config");
  app.add_option("--mode", mode, "surrogate, baseline, short or error")
      ->check(CLI::IsMember({"surrogate", "baseline", "short", "error"}));
  app.add_option("--delay-ms", delay_ms, "Delay before every reply")->check(CLI::NonNegativeNumber);
  app.add_option("--port", port, "TCP port on 127.0.0.1 (0 picks a free one)")->check(CLI::Range(0, 65535));
  app.add_flag("--stdio", stdio, "Serve on stdin/stdout instead of TCP");
  CLI11_PARSE(app, argc, argv);

  std::signal(SIGPIPE, SIG_IGN);
  try {
    smartskin::MockOptions options;
    options.delay = std::chrono::milliseconds(delay_ms);
    if (mode == "baseline") options.mode = smartskin::MockMode::baseline;
    if (mode == "short") options.mode = smartskin::MockMode::short_response;
    if (mode == "error") options.mode = smartskin::MockMode::error;
    const auto cfg = smartskin::load_surrogate_config(config);
    if (stdio) {
      smartskin::MockResponder responder(cfg, options);
      responder.serve(0, 1);
      return 0;
    }
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    smartskin::MockPlantServer server(cfg, options, static_cast<std::uint16_t>(port));
    std::cout << "listening " << server.endpoint() << std::endl;
    while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
  } catch (const std::exception& e) {
    std::cerr << "mock_plant: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

// ethervote: run simulated elections, verify chain dumps, serve the HTTP API.

#include <CLI11.hpp>

#include <csignal>
#include <iostream>
#include <random>

#include "ethervote/api_service.hpp"
#include "ethervote/error.hpp"
#include "ethervote/http_server.hpp"
#include "ethervote/simulation.hpp"

namespace {

using namespace ethervote;

HttpServer* g_server = nullptr;

int run_command(const std::string& path, std::optional<std::uint64_t> seed,
                const std::optional<std::string>& dump, bool json) {
  auto scenario = load_scenario(path);
  RunOptions options;
  if (dump) options.dump_path = *dump;
  auto run = run_scenario(scenario, seed, options);
  if (json) {
    std::cout << to_json(run.report).dump(2) << "\n";
  } else {
    std::cout << to_text(run.report);
  }
  return run.report.all_checks_passed() ? 0 : 1;
}

int verify_command(const std::string& path, bool json) {
  auto v = verify_chain_file(path);
  if (json) {
    std::cout << to_json(v).dump(2) << "\n";
  } else if (v.valid()) {
    std::cout << "valid: " << v.ledger.blocks_checked << " blocks, " << v.tally.total_votes << " votes\n";
    for (const auto& e : v.tally.counts) std::cout << "  [" << e.candidate_id << "] " << e.name << ": " << e.votes << "\n";
  } else if (!v.ledger.valid) {
    std::cout << "invalid: block " << v.ledger.first_bad_index.value_or(0) << ": " << v.ledger.reason << "\n";
  } else if (!v.replay_consistent) {
    std::cout << "invalid: contract replay fails at block " << v.replay_bad_index.value_or(0) << ": "
              << v.replay_reason << "\n";
  } else {
    std::cout << "invalid: tally does not match VoteCast transactions\n";
  }
  return v.valid() ? 0 : 1;
}

struct ServeOptions {
  std::string bind = "127.0.0.1:8080";
  std::optional<std::string> chain;
  std::optional<std::uint64_t> otp_window;
  std::optional<std::uint64_t> seed;
  std::uint32_t authorities = 1;
  bool dev_inbox = false;
};

int serve_command(const ServeOptions& opt) {
  auto colon = opt.bind.rfind(':');
  if (colon == std::string::npos) throw Error(ErrorCode::BadRequest, "--bind expects host:port");
  const std::string host = opt.bind.substr(0, colon);
  const int port = std::stoi(opt.bind.substr(colon + 1));

  Clock clock = system_clock();
  std::unique_ptr<ElectionNode> node;
  if (opt.chain) {
    node = ElectionNode::open(*opt.chain, clock, opt.seed);
  } else {
    const std::uint64_t seed = opt.seed ? *opt.seed : std::random_device{}();
    node = std::make_unique<ElectionNode>(clock, seed, clock());
  }
  if (!node->contract().state().initialized) {
    for (std::uint32_t i = 0; i < opt.authorities; ++i) {
      auto created = node->accounts().create_account();
      std::cout << "authority " << created.account.address.to_string() << " password " << created.password << "\n";
    }
    node->save_offchain();
  }

  ServiceConfig config;
  if (opt.otp_window) config.default_otp_window = *opt.otp_window;
  config.dev_inbox = opt.dev_inbox;
#ifndef ETHERVOTE_DEV_PANEL
  if (opt.dev_inbox) std::cerr << "warning: built without ETHERVOTE_DEV_PANEL; --dev-inbox ignored\n";
#endif
  ApiService service(*node, opt.seed ? Drbg::from_seed(*opt.seed, "sessions") : Drbg::from_entropy(), config);
  HttpServer server(service);
  g_server = &server;
  std::signal(SIGINT, [](int) {
    if (g_server) g_server->stop();
  });
  std::signal(SIGTERM, [](int) {
    if (g_server) g_server->stop();
  });
  std::cout << "listening on " << host << ":" << port << std::endl;
  if (!server.listen(host, port)) {
    std::cerr << "cannot listen on " << opt.bind << "\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"EtherVote election simulator and service"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> dump;
  bool json = false;
  auto* run = app.add_subcommand("run", "Run a scenario end to end and check invariants");
  run->add_option("scenario", scenario_path, "Scenario file")->required()->check(CLI::ExistingFile);
  run->add_option("--seed", seed, "Override the scenario seed");
  run->add_option("--dump", dump, "Write the resulting chain to this file");
  run->add_flag("--json", json, "Print the report as JSON");

  std::string chain_path;
  bool verify_json = false;
  auto* verify = app.add_subcommand("verify", "Verify a chain file and replay the contract over it");
  verify->add_option("chain-file", chain_path, "Chain file")->required();
  verify->add_flag("--json", verify_json, "Print the report as JSON");

  ServeOptions serve_opts;
  auto* serve = app.add_subcommand("serve", "Run the HTTP election service");
  serve->add_option("--bind", serve_opts.bind, "host:port")->envname("ETHERVOTE_BIND");
  serve->add_option("--chain", serve_opts.chain, "Chain persistence file")->envname("ETHERVOTE_CHAIN");
  serve->add_option("--otp-window", serve_opts.otp_window, "Default OTP window in seconds")
      ->envname("ETHERVOTE_OTP_WINDOW");
  serve->add_option("--seed", serve_opts.seed, "Deterministic seed (simulation only)")->envname("ETHERVOTE_SEED");
  serve->add_option("--authorities", serve_opts.authorities, "Authority accounts to create on a fresh chain");
  serve->add_flag("--dev-inbox", serve_opts.dev_inbox, "Expose GET /dev/inbox/{address}");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return run_command(scenario_path, seed, dump, json);
    if (*verify) return verify_command(chain_path, verify_json);
    if (*serve) return serve_command(serve_opts);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

#include "ethervote/node.hpp"

#include "ethervote/error.hpp"

namespace ethervote {

ElectionNode::ElectionNode(Clock clock, Drbg account_rng, Drbg otp_rng)
    : clock_(std::move(clock)),
      accounts_(std::make_unique<AccountStore>(std::move(account_rng))),
      transport_(std::make_shared<MockTransport>()),
      gateway_(std::make_unique<OtpGateway>(transport_)),
      otp_rng_(std::move(otp_rng)) {}

ElectionNode::ElectionNode(Clock clock, std::uint64_t seed, Timestamp genesis_time)
    : ElectionNode(std::move(clock), Drbg::from_seed(seed, "accounts"), Drbg::from_seed(seed, "otp")) {
  ledger_ = Ledger::with_genesis(genesis_time, accounts_.get());
  contract_ = std::make_unique<Contract>(*ledger_, *gateway_, *accounts_, otp_rng_, clock_);
}

std::filesystem::path ElectionNode::accounts_path(const std::filesystem::path& chain) {
  return chain.string() + ".accounts";
}

std::filesystem::path ElectionNode::channels_path(const std::filesystem::path& chain) {
  return chain.string() + ".channels";
}

std::unique_ptr<ElectionNode> ElectionNode::open(const std::filesystem::path& chain_path, Clock clock,
                                                 std::optional<std::uint64_t> seed) {
  auto account_rng = seed ? Drbg::from_seed(*seed, "accounts") : Drbg::from_entropy();
  auto otp_rng = seed ? Drbg::from_seed(*seed, "otp") : Drbg::from_entropy();
  std::unique_ptr<ElectionNode> node(new ElectionNode(std::move(clock), std::move(account_rng), std::move(otp_rng)));
  node->chain_path_ = chain_path;
  if (std::filesystem::exists(chain_path)) {
    if (std::filesystem::exists(accounts_path(chain_path))) node->accounts_->load(accounts_path(chain_path));
    if (std::filesystem::exists(channels_path(chain_path))) node->gateway_->load_channels(channels_path(chain_path));
    node->ledger_ = Ledger::load_file(chain_path, node->accounts_.get());
  } else {
    node->ledger_ = Ledger::with_genesis(node->clock_(), node->accounts_.get());
    node->ledger_->persist_to(chain_path);
  }
  node->contract_ = std::make_unique<Contract>(*node->ledger_, *node->gateway_, *node->accounts_,
                                               node->otp_rng_, node->clock_);
  return node;
}

void ElectionNode::save_offchain() const {
  if (!chain_path_) return;
  accounts_->save(accounts_path(*chain_path_));
  gateway_->save_channels(channels_path(*chain_path_));
}

}  // namespace ethervote

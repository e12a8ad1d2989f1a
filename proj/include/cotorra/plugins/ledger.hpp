#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "cotorra/types.hpp"

namespace cotorra::plugins {

enum class FederationTxKind { Request, Accept, DeployDone, AttachDone };

std::string_view to_string(FederationTxKind kind) noexcept;

struct FederationTx {
  FederationTxKind kind = FederationTxKind::Request;
  std::string domain;
  std::map<std::string, std::string> payload;
  TimeMs submitted_ms = 0;
};

struct LedgerBlock {
  std::uint64_t index = 0;
  TimeMs t_ms = 0;
  std::vector<FederationTx> txs;
};

/// Shared append-only ledger with synchronized block closing every
/// `block_interval_ms`, at t = k * interval for k >= 1. A transaction lands
/// in the first block closing strictly after its submission.
class Ledger {
 public:
  explicit Ledger(TimeMs block_interval_ms);

  TimeMs block_interval_ms() const noexcept { return interval_; }
  void submit(FederationTx tx, TimeMs now);
  // Closes every block due at or before `now`, returning them in order.
  std::vector<LedgerBlock> close_due(TimeMs now);

  const std::vector<LedgerBlock>& chain() const noexcept { return chain_; }
  std::size_t pending() const noexcept { return mempool_.size(); }
  TimeMs next_block_after(TimeMs t) const;

 private:
  TimeMs interval_;
  TimeMs next_close_;
  std::vector<FederationTx> mempool_;
  std::vector<LedgerBlock> chain_;
};

}  // namespace cotorra::plugins

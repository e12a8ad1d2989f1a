#include "cotorra/plugins/ledger.hpp"

#include "cotorra/error.hpp"

namespace cotorra::plugins {

std::string_view to_string(FederationTxKind kind) noexcept {
  switch (kind) {
    case FederationTxKind::Request: return "Request";
    case FederationTxKind::Accept: return "Accept";
    case FederationTxKind::DeployDone: return "DeployDone";
    case FederationTxKind::AttachDone: return "AttachDone";
  }
  return "Unknown";
}

Ledger::Ledger(TimeMs block_interval_ms) : interval_(block_interval_ms), next_close_(block_interval_ms) {
  if (interval_ <= 0) throw Error(ErrorCode::InvalidArgument, "block interval must be > 0");
}

void Ledger::submit(FederationTx tx, TimeMs now) {
  tx.submitted_ms = now;
  mempool_.push_back(std::move(tx));
}

TimeMs Ledger::next_block_after(TimeMs t) const {
  if (t < 0) return interval_;
  return (t / interval_ + 1) * interval_;
}

std::vector<LedgerBlock> Ledger::close_due(TimeMs now) {
  std::vector<LedgerBlock> closed;
  while (next_close_ <= now) {
    LedgerBlock block{chain_.size() + 1, next_close_, {}};
    std::vector<FederationTx> keep;
    for (auto& tx : mempool_) {
      if (tx.submitted_ms < next_close_) {
        block.txs.push_back(std::move(tx));
      } else {
        keep.push_back(std::move(tx));
      }
    }
    mempool_ = std::move(keep);
    chain_.push_back(block);
    closed.push_back(std::move(block));
    next_close_ += interval_;
  }
  return closed;
}

}  // namespace cotorra::plugins

#pragma once

#include <deque>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cotorra/plugin_runtime.hpp"
#include "cotorra/plugins/ledger.hpp"

namespace cotorra::plugins {

struct FederationParams {
  NodeId robot = "robot1";
  std::string requester_domain = "d1";
  std::string provider_domain = "d2";
  NodeId provider_ru = "Rd";  // radio unit of the provider domain that will host the vAP
  VnfId vnf = "vAP";
  TimeMs block_interval_ms = 5000;
  TimeMs attach_ms = 1000;       // association + confirmation after the handover is issued
  TimeMs horizon_ms = 10000;     // look-ahead for the coverage-exit prediction
  std::size_t rssi_window = 10;  // samples in the linear fit
  TimeMs timeout_ms = 60000;     // Request -> AttachDone bound
};

// Request-submission to AttachDone-submission time implied by the protocol
// for a request submitted at `request_ms`: Request inclusion wait, Accept
// inclusion wait, instantiation, DeployDone inclusion wait, attach.
TimeMs federation_closed_form_ms(TimeMs request_ms, TimeMs block_interval_ms, TimeMs deploy_ms, TimeMs attach_ms);

// Least-squares line through (t, rssi) samples evaluated at `at_ms`.
double extrapolate_linear(const std::deque<std::pair<TimeMs, double>>& samples, TimeMs at_ms);

/// Two-domain service federation negotiated over a shared ledger. The
/// requesting domain watches its robot leave coverage and asks the provider
/// for a vAP; the provider deploys it once its acceptance is on-chain; the
/// requester moves the robot over once deployment is confirmed on-chain.
class FederationPlugin final : public Plugin {
 public:
  enum class RequesterState { Watching, Requested, Attaching, Done, TimedOut };
  enum class ProviderState { Idle, Accepting, Deploying, Deployed };

  explicit FederationPlugin(FederationParams params);

  std::string name() const override { return "federation"; }
  PluginOutput on_tick(const WorldView& view) override;

  const Ledger& ledger() const noexcept { return ledger_; }
  const FederationParams& params() const noexcept { return params_; }
  RequesterState requester_state() const noexcept { return requester_; }
  ProviderState provider_state() const noexcept { return provider_; }
  std::optional<TimeMs> request_ms() const noexcept { return request_ms_; }
  std::optional<TimeMs> total_ms() const;

 private:
  void submit(FederationTxKind kind, const std::string& domain, TimeMs now, PluginOutput& out);
  void on_block(const LedgerBlock& block, const WorldView& view, PluginOutput& out);
  void requester_tick(const WorldView& view, PluginOutput& out);
  void provider_tick(const WorldView& view, PluginOutput& out);

  FederationParams params_;
  Ledger ledger_;
  RequesterState requester_ = RequesterState::Watching;
  ProviderState provider_ = ProviderState::Idle;
  std::deque<std::pair<TimeMs, double>> rssi_samples_;
  std::optional<TimeMs> request_ms_;
  std::optional<TimeMs> attach_issued_ms_;
  std::optional<TimeMs> attach_done_ms_;
};

}  // namespace cotorra::plugins

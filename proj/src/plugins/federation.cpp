#include "cotorra/plugins/federation.hpp"

#include <cmath>

namespace cotorra::plugins {

TimeMs federation_closed_form_ms(TimeMs request_ms, TimeMs block_interval_ms, TimeMs deploy_ms, TimeMs attach_ms) {
  const Ledger clock(block_interval_ms);
  const TimeMs request_block = clock.next_block_after(request_ms);
  const TimeMs accept_block = clock.next_block_after(request_block);
  const TimeMs deployed = accept_block + deploy_ms;
  const TimeMs deploy_done_block = clock.next_block_after(deployed);
  return deploy_done_block + attach_ms - request_ms;
}

double extrapolate_linear(const std::deque<std::pair<TimeMs, double>>& samples, TimeMs at_ms) {
  if (samples.empty()) return std::nan("");
  const double n = static_cast<double>(samples.size());
  const double t0 = static_cast<double>(samples.front().first);
  double mean_t = 0.0;
  double mean_v = 0.0;
  for (const auto& [t, v] : samples) {
    mean_t += (static_cast<double>(t) - t0) / n;
    mean_v += v / n;
  }
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& [t, v] : samples) {
    const double dt = static_cast<double>(t) - t0 - mean_t;
    sxx += dt * dt;
    sxy += dt * (v - mean_v);
  }
  if (sxx == 0.0) return samples.back().second;
  const double slope = sxy / sxx;
  return mean_v + slope * (static_cast<double>(at_ms) - t0 - mean_t);
}

FederationPlugin::FederationPlugin(FederationParams params)
    : params_(std::move(params)), ledger_(params_.block_interval_ms) {
  if (params_.rssi_window < 2) throw Error(ErrorCode::InvalidArgument, "rssi_window must be >= 2");
  if (params_.attach_ms < 0 || params_.horizon_ms < 0 || params_.timeout_ms <= 0) {
    throw Error(ErrorCode::InvalidArgument, "federation delays must be non-negative");
  }
  if (params_.requester_domain == params_.provider_domain) {
    throw Error(ErrorCode::InvalidArgument, "federation needs two distinct domains");
  }
}

std::optional<TimeMs> FederationPlugin::total_ms() const {
  if (!request_ms_ || !attach_done_ms_) return std::nullopt;
  return *attach_done_ms_ - *request_ms_;
}

void FederationPlugin::submit(FederationTxKind kind, const std::string& domain, TimeMs now, PluginOutput& out) {
  FederationTx tx{kind, domain, {{"robot", params_.robot.str()}, {"ru", params_.provider_ru.str()}}, now};
  ledger_.submit(tx, now);
  out.events.push_back({now, "tx_submit", domain, "kind=" + std::string(to_string(kind))});
}

PluginOutput FederationPlugin::on_tick(const WorldView& view) {
  PluginOutput out;
  for (const auto& block : ledger_.close_due(view.now())) on_block(block, view, out);
  provider_tick(view, out);
  requester_tick(view, out);
  return out;
}

void FederationPlugin::on_block(const LedgerBlock& block, const WorldView& view, PluginOutput& out) {
  if (block.txs.empty()) return;
  std::string txs;
  for (const auto& tx : block.txs) {
    txs += (txs.empty() ? "" : "|") + std::string(to_string(tx.kind)) + "@" + tx.domain;
  }
  out.events.push_back({view.now(), "block", "ledger", "index=" + std::to_string(block.index) + ";txs=" + txs});

  // Both domains read the same block; each reacts to the other's messages.
  for (const auto& tx : block.txs) {
    switch (tx.kind) {
      case FederationTxKind::Request:
        if (tx.domain == params_.requester_domain && provider_ == ProviderState::Idle) {
          submit(FederationTxKind::Accept, params_.provider_domain, view.now(), out);
          provider_ = ProviderState::Accepting;
        }
        break;
      case FederationTxKind::Accept:
        if (tx.domain == params_.provider_domain && provider_ == ProviderState::Accepting) {
          out.instructions.push_back(PlaceVnfInstruction{params_.vnf, params_.provider_ru});
          out.events.push_back({view.now(), "place_vnf", params_.provider_domain,
                                params_.vnf.str() + "@" + params_.provider_ru.str()});
          provider_ = ProviderState::Deploying;
        }
        break;
      case FederationTxKind::DeployDone:
        if (tx.domain == params_.provider_domain && requester_ == RequesterState::Requested) {
          out.instructions.push_back(HandoverInstruction{params_.robot, params_.provider_ru});
          out.events.push_back({view.now(), "handover", params_.requester_domain,
                                params_.robot.str() + "->" + params_.provider_ru.str()});
          attach_issued_ms_ = view.now();
          requester_ = RequesterState::Attaching;
        }
        break;
      case FederationTxKind::AttachDone:
        break;
    }
  }
}

void FederationPlugin::provider_tick(const WorldView& view, PluginOutput& out) {
  if (provider_ != ProviderState::Deploying) return;
  const auto host = view.net().host_of(params_.vnf);
  if (host && *host == params_.provider_ru) {
    out.events.push_back({view.now(), "deploy_done", params_.provider_domain,
                          params_.vnf.str() + "@" + params_.provider_ru.str()});
    submit(FederationTxKind::DeployDone, params_.provider_domain, view.now(), out);
    provider_ = ProviderState::Deployed;
  }
}

void FederationPlugin::requester_tick(const WorldView& view, PluginOutput& out) {
  const NetControl& net = view.net();
  const TimeMs now = view.now();

  if ((requester_ == RequesterState::Requested || requester_ == RequesterState::Attaching) &&
      now - *request_ms_ > params_.timeout_ms) {
    out.events.push_back({now, "timeout", params_.requester_domain,
                          std::string(to_string(ErrorCode::FederationTimeout))});
    requester_ = RequesterState::TimedOut;
    return;
  }

  switch (requester_) {
    case RequesterState::Watching: {
      const auto ru = net.attachment(params_.robot);
      if (!ru || view.graph().node(*ru).domain != params_.requester_domain) return;
      const Vec2 estimate = view.sample_localization(params_.robot).estimate;
      const auto& radio = net.config().radio;
      rssi_samples_.emplace_back(now, radio.rssi_dbm(distance(estimate, view.graph().node(*ru).position)));
      while (rssi_samples_.size() > params_.rssi_window) rssi_samples_.pop_front();
      if (rssi_samples_.size() < params_.rssi_window) return;
      const double predicted = extrapolate_linear(rssi_samples_, now + params_.horizon_ms);
      if (predicted < radio.attach_threshold_dbm) {
        request_ms_ = now;
        submit(FederationTxKind::Request, params_.requester_domain, now, out);
        requester_ = RequesterState::Requested;
      }
      return;
    }
    case RequesterState::Attaching: {
      const auto ru = net.attachment(params_.robot);
      if (ru && *ru == params_.provider_ru) {
        if (now >= *attach_issued_ms_ + params_.attach_ms) {
          attach_done_ms_ = now;
          submit(FederationTxKind::AttachDone, params_.requester_domain, now, out);
          out.events.push_back({now, "complete", params_.requester_domain,
                                "total_ms=" + std::to_string(*attach_done_ms_ - *request_ms_)});
          requester_ = RequesterState::Done;
        }
      } else if (now > *attach_issued_ms_ && !net.handover_in_progress(params_.robot)) {
        out.instructions.push_back(HandoverInstruction{params_.robot, params_.provider_ru});
      }
      return;
    }
    case RequesterState::Requested:
    case RequesterState::Done:
    case RequesterState::TimedOut:
      return;
  }
}

}  // namespace cotorra::plugins

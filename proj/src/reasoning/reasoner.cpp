#include "catnav/reasoning/reasoner.hpp"

#include <chrono>

#include "catnav/core/encoding.hpp"

namespace catnav::reasoning {

std::string SelectionRequest::prompt_digest() const {
  std::string text = modality_text + '\n' + behavior_text + '\n' + std::to_string(frame_id) + '\n';
  for (const auto& h : history) text += h.prompt_digest + ':' + format_selection(h.result) + '\n';
  std::uint64_t h = fnv1a64(text);
  const auto& px = overlay.pixels.data();
  h = fnv1a64(std::string_view(reinterpret_cast<const char*>(px.data()), px.size() * sizeof(Rgb)), h);
  return hex64(h);
}

Json to_json(const Exchange& e) {
  return Json{{"frame_id", e.frame_id}, {"dispatched_at", e.dispatched_at}, {"resolved_at", e.resolved_at},
              {"prompt_digest", e.prompt_digest}, {"reply", e.reply}, {"status", e.status},
              {"result", to_json(e.result)}};
}

Reasoner::Reasoner(std::shared_ptr<PathSelector> provider, ReasonerConfig config, DispatchMode mode,
                   double simulated_delay)
    : provider_(std::move(provider)), config_(config), mode_(mode), delay_(simulated_delay) {}

Reasoner::~Reasoner() { wait_idle(); }

RequestOutcome Reasoner::request_selection(const OverlayImage& overlay, const planner::ProposalSet& proposals,
                                           const RobotModality& modality, const BehaviorSpec& behavior, double now,
                                           std::shared_ptr<const costmap::OccupancyGrid> grid) {
  Pending pending;
  {
    std::lock_guard lock(mutex_);
    if (last_query_time_ && now - *last_query_time_ < config_.min_interval) return RequestOutcome::kDeferred;
    last_query_time_ = now;
    ++dispatches_;
    pending.request.frame_id = proposals.frame_id;
    pending.request.overlay = overlay;
    pending.request.proposals = proposals;
    pending.request.modality_text = modality.description;
    pending.request.behavior_text = behavior.text;
    pending.request.history.assign(history_.begin(), history_.end());
    pending.request.grid = std::move(grid);
    pending.digest = pending.request.prompt_digest();
    pending.dispatched_at = now;
  }

  if (mode_ == DispatchMode::kSimulated) {
    pending.ready_at = now + delay_;
    try {
      pending.reply = provider_->select_path(pending.request);
    } catch (const std::exception&) {
      pending.failed = true;
    }
  } else {
    auto provider = provider_;
    auto request = pending.request;
    pending.future = std::async(std::launch::async, [provider, request] { return provider->select_path(request); })
                         .share();
  }
  std::lock_guard lock(mutex_);
  pending_.push_back(std::move(pending));
  return RequestOutcome::kDispatched;
}

void Reasoner::resolve(Pending& p, const std::optional<std::string>& reply, const std::string& failure, double now) {
  Exchange ex;
  ex.frame_id = p.request.frame_id;
  ex.dispatched_at = p.dispatched_at;
  ex.resolved_at = now;
  ex.prompt_digest = p.digest;
  if (reply) {
    ex.reply = *reply;
    ex.result = parse_selection(*reply, p.request.proposals);
    if (active_ && ex.result.frame_id < active_->frame_id) {
      ex.status = "stale";
    } else {
      ex.status = "applied";
      active_ = ex.result;
      history_.push_back({p.digest, ex.result});
      while (static_cast<int>(history_.size()) > config_.history_length) history_.pop_front();
    }
  } else {
    ex.status = failure;
    ex.result = cost_argmin(p.request.proposals, failure + "-fallback");
    ex.result.fallback = true;
    if (!active_) active_ = ex.result;
  }
  exchanges_.push_back(std::move(ex));
}

void Reasoner::poll(double now) {
  std::lock_guard lock(mutex_);
  std::vector<Pending> still;
  for (auto& p : pending_) {
    const bool expired = now - p.dispatched_at >= config_.timeout;
    if (mode_ == DispatchMode::kSimulated) {
      if (p.ready_at - p.dispatched_at > config_.timeout) {
        if (expired) resolve(p, std::nullopt, "timeout", now);
        else still.push_back(std::move(p));
      } else if (now >= p.ready_at) {
        resolve(p, p.failed ? std::nullopt : p.reply, "error", now);
      } else {
        still.push_back(std::move(p));
      }
      continue;
    }
    if (p.future.wait_for(std::chrono::seconds(0)) == std::future_status::ready) {
      try {
        resolve(p, p.future.get(), "error", now);
      } catch (const std::exception&) {
        resolve(p, std::nullopt, "error", now);
      }
    } else if (expired) {
      abandoned_.push_back(p.future);
      resolve(p, std::nullopt, "timeout", now);
    } else {
      still.push_back(std::move(p));
    }
  }
  pending_ = std::move(still);
}

std::optional<SelectionResult> Reasoner::active_selection() const {
  std::lock_guard lock(mutex_);
  return active_;
}

std::vector<HistoryItem> Reasoner::history() const {
  std::lock_guard lock(mutex_);
  return {history_.begin(), history_.end()};
}

std::size_t Reasoner::dispatch_count() const {
  std::lock_guard lock(mutex_);
  return dispatches_;
}

std::size_t Reasoner::in_flight() const {
  std::lock_guard lock(mutex_);
  return pending_.size();
}

std::vector<Exchange> Reasoner::drain_exchanges() {
  std::lock_guard lock(mutex_);
  return std::exchange(exchanges_, {});
}

void Reasoner::wait_idle() {
  std::vector<std::shared_future<std::string>> futures;
  {
    std::lock_guard lock(mutex_);
    for (const auto& p : pending_)
      if (p.future.valid()) futures.push_back(p.future);
    futures.insert(futures.end(), abandoned_.begin(), abandoned_.end());
  }
  for (auto& f : futures) f.wait();
}

}  // namespace catnav::reasoning

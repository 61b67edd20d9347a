#pragma once

#include <deque>
#include <future>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "catnav/costmap/occupancy_grid.hpp"
#include "catnav/reasoning/overlay.hpp"
#include "catnav/reasoning/selection.hpp"

namespace catnav::reasoning {

struct HistoryItem {
  std::string prompt_digest;
  SelectionResult result;
};

/// Everything a selector sees for one decision. `grid` is a snapshot for
/// selectors that score paths locally; it is not sent over the wire.
struct SelectionRequest {
  int frame_id = 0;
  OverlayImage overlay;
  planner::ProposalSet proposals;
  std::string modality_text;
  std::string behavior_text;
  std::vector<HistoryItem> history;
  std::shared_ptr<const costmap::OccupancyGrid> grid;

  /// Digest over the prompt fields and the overlay pixels.
  std::string prompt_digest() const;
};

/// Trajectory-selector provider: returns the raw two-line reply.
class PathSelector {
 public:
  virtual ~PathSelector() = default;
  virtual std::string select_path(const SelectionRequest& request) = 0;
};

struct ReasonerConfig {
  int history_length = 4;
  double min_interval = 1.0;
  double timeout = 10.0;
};

enum class DispatchMode {
  kThread,     // provider runs on a worker thread; poll() collects finished replies
  kSimulated,  // provider runs at dispatch, reply delivered `delay` seconds later
};

enum class RequestOutcome { kDispatched, kDeferred };

/// One provider exchange as recorded in the replay log.
struct Exchange {
  int frame_id = 0;
  double dispatched_at = 0.0;
  double resolved_at = 0.0;
  std::string prompt_digest;
  std::string reply;  // verbatim; empty on error or timeout
  std::string status;  // "applied", "stale", "timeout", "error"
  SelectionResult result;
};

Json to_json(const Exchange& exchange);

/// Rate-limited asynchronous selection with a sliding history. All state is
/// guarded by one mutex; the provider itself runs outside the lock.
class Reasoner {
 public:
  Reasoner(std::shared_ptr<PathSelector> provider, ReasonerConfig config = {},
           DispatchMode mode = DispatchMode::kSimulated, double simulated_delay = 0.5);
  ~Reasoner();

  Reasoner(const Reasoner&) = delete;
  Reasoner& operator=(const Reasoner&) = delete;

  RequestOutcome request_selection(const OverlayImage& overlay, const planner::ProposalSet& proposals,
                                   const RobotModality& modality, const BehaviorSpec& behavior, double now,
                                   std::shared_ptr<const costmap::OccupancyGrid> grid = nullptr);

  /// Applies every reply that is ready at `now` and expires overdue requests.
  void poll(double now);

  std::optional<SelectionResult> active_selection() const;
  std::vector<HistoryItem> history() const;
  std::size_t dispatch_count() const;
  std::size_t in_flight() const;
  std::vector<Exchange> drain_exchanges();

  /// Blocks until every in-flight threaded request has finished.
  void wait_idle();

 private:
  struct Pending {
    SelectionRequest request;
    std::string digest;
    double dispatched_at = 0.0;
    double ready_at = 0.0;  // simulated mode
    std::optional<std::string> reply;  // simulated mode
    bool failed = false;  // simulated mode
    std::shared_future<std::string> future;  // thread mode
  };

  void resolve(Pending& pending, const std::optional<std::string>& reply, const std::string& failure, double now);

  std::shared_ptr<PathSelector> provider_;
  ReasonerConfig config_;
  DispatchMode mode_;
  double delay_;

  mutable std::mutex mutex_;
  std::deque<HistoryItem> history_;
  std::optional<double> last_query_time_;
  std::optional<SelectionResult> active_;
  std::vector<Pending> pending_;
  std::vector<std::shared_future<std::string>> abandoned_;
  std::vector<Exchange> exchanges_;
  std::size_t dispatches_ = 0;
};

}  // namespace catnav::reasoning

#include <gtest/gtest.h>

#include <cmath>
#include <condition_variable>
#include <random>
#include <thread>

#include "catnav/planner/proposals.hpp"
#include "catnav/reasoning/mock_select.hpp"
#include "catnav/reasoning/overlay.hpp"
#include "catnav/reasoning/reasoner.hpp"
#include "scenes.hpp"

using namespace catnav;
using namespace catnav::reasoning;
using planner::PlannedPath;
using planner::ProposalLabel;
using planner::ProposalSet;

namespace {

PlannedPath straight(ProposalLabel label, double y0, double y1, double length = 5.0, double cost = 0.0) {
  PlannedPath p;
  p.label = label;
  p.color = planner::palette_color(label);
  for (int i = 0; i <= 20; ++i) {
    const double t = i / 20.0;
    p.waypoints.push_back(make_pose(t * length, y0 + t * (y1 - y0), 0.0));
  }
  p.total_length = planner::polyline_length(p.waypoints);
  p.accumulated_cost = cost;
  return p;
}

ProposalSet full_set(int frame_id = 1) {
  ProposalSet s;
  s.frame_id = frame_id;
  s.proposals = {straight(ProposalLabel::kCenter, 0, 0, 5, 0.3), straight(ProposalLabel::kLeft, 0, 0.6, 5, 0.2),
                 straight(ProposalLabel::kRight, 0, -0.6, 5, 0.2), straight(ProposalLabel::kRisky, 0, 0, 4, 0.9)};
  return s;
}

// Centerline y = 0; a paper sheet covers x in [2, 3], y in [-0.3, 0.3].
class StripTruth : public SceneTruth {
 public:
  std::string class_at(double x, double y) const override {
    return (x >= 2.0 && x <= 3.0 && std::abs(y) <= 0.3) ? "paper" : "floor";
  }
  double lateral_offset(double, double y) const override { return y; }
};

// Ground projection written out from the mount geometry, independent of the
// costmap helpers.
std::array<double, 2> project_ground(const CameraModel& cam, double X, double Y) {
  const double h = cam.mount_height, p = cam.pitch;
  const double xc = -Y;
  const double yc = -X * std::sin(p) + h * std::cos(p);
  const double zc = X * std::cos(p) + h * std::sin(p);
  return {cam.fx * xc / zc + cam.cx, cam.fy * yc / zc + cam.cy};
}

Image<Rgb> gray(const CameraModel& cam) {
  Image<Rgb> img(cam.width, cam.height);
  for (auto& px : img.data()) px = {90, 90, 90};
  return img;
}

}  // namespace

TEST(Overlay, StraightPathRunsDownTheCenterColumn) {
  CameraModel cam;
  ProposalSet set;
  set.proposals = {straight(ProposalLabel::kCenter, 0, 0, 6.0)};
  set.proposals[0].waypoints.erase(set.proposals[0].waypoints.begin());  // start 0.3 m ahead
  const auto out = render_overlay(gray(cam), set, cam, make_pose(0, 0, 0));
  ASSERT_EQ(out.legend.size(), 1u);
  EXPECT_FALSE(out.legend[0].off_view);
  const Rgb green = planner::palette_color(ProposalLabel::kCenter);
  int colored = 0;
  for (int v = 0; v < cam.height; ++v)
    for (int u = 0; u < cam.width; ++u)
      if (out.pixels.at(u, v) == green) {
        ++colored;
        EXPECT_LE(std::abs(u - cam.cx), 1.5);
      }
  EXPECT_GT(colored, 20);
  for (double X : {0.6, 1.0, 2.0, 4.0}) {
    const auto uv = project_ground(cam, X, 0.0);
    if (uv[1] < 0 || uv[1] >= cam.height) continue;
    EXPECT_EQ(out.pixels.at(static_cast<int>(std::lround(uv[0])), static_cast<int>(std::lround(uv[1]))), green) << X;
  }
}

TEST(Overlay, LateralOffsetLandsOnProjectedColumns) {
  CameraModel cam;
  ProposalSet set;
  set.proposals = {straight(ProposalLabel::kLeft, 0.6, 0.6, 5.0)};
  set.proposals[0].waypoints.erase(set.proposals[0].waypoints.begin(), set.proposals[0].waypoints.begin() + 4);
  const auto out = render_overlay(gray(cam), set, cam, make_pose(0, 0, 0));
  const auto uv = project_ground(cam, 2.0, 0.6);
  EXPECT_LT(uv[0], cam.cx);
  EXPECT_EQ(out.pixels.at(static_cast<int>(std::lround(uv[0])), static_cast<int>(std::lround(uv[1]))),
            planner::palette_color(ProposalLabel::kLeft));
}

TEST(Overlay, RobotPoseTransformsWorldWaypoints) {
  CameraModel cam;
  ProposalSet set;
  PlannedPath p = straight(ProposalLabel::kCenter, 0, 0, 4.0);
  for (auto& w : p.waypoints) w = make_pose(10.0, 5.0 + w.x, 0.0);  // heading +y in the world
  set.proposals = {p};
  const auto out = render_overlay(gray(cam), set, cam, make_pose(10.0, 5.0, std::numbers::pi / 2));
  const auto uv = project_ground(cam, 2.0, 0.0);
  EXPECT_EQ(out.pixels.at(static_cast<int>(std::lround(uv[0])), static_cast<int>(std::lround(uv[1]))),
            planner::palette_color(ProposalLabel::kCenter));
}

TEST(Overlay, EmptySetLeavesImageUntouched) {
  CameraModel cam;
  const auto img = gray(cam);
  const auto out = render_overlay(img, ProposalSet{}, cam, make_pose(0, 0, 0));
  EXPECT_EQ(out.pixels, img);
  EXPECT_TRUE(out.legend.empty());
}

TEST(Overlay, PathBehindCameraIsOffView) {
  CameraModel cam;
  ProposalSet set;
  set.proposals = {straight(ProposalLabel::kRisky, 0, 0, -4.0)};
  set.proposals[0].waypoints.erase(set.proposals[0].waypoints.begin(), set.proposals[0].waypoints.begin() + 4);
  const auto img = gray(cam);
  const auto out = render_overlay(img, set, cam, make_pose(0, 0, 0));
  ASSERT_EQ(out.legend.size(), 1u);
  EXPECT_TRUE(out.legend[0].off_view);
  EXPECT_EQ(out.pixels, img);
}

TEST(Overlay, LegendMatchesProposalSet) {
  CameraModel cam;
  const auto set = full_set();
  const auto out = render_overlay(gray(cam), set, cam, make_pose(0, 0, 0));
  ASSERT_EQ(out.legend.size(), set.proposals.size());
  for (std::size_t i = 0; i < set.proposals.size(); ++i) {
    EXPECT_EQ(out.legend[i].label, set.proposals[i].label);
    EXPECT_EQ(out.legend[i].color, set.proposals[i].color);
  }
}

TEST(Parse, TwoLineReplyPicksColor) {
  const auto r = parse_selection("Reason: clearest lane\nColor: green", full_set(7));
  EXPECT_EQ(r.choice, ProposalLabel::kCenter);
  EXPECT_EQ(r.reason, "clearest lane");
  EXPECT_EQ(r.frame_id, 7);
  EXPECT_FALSE(r.fallback);
}

TEST(Parse, NoneMeansNoChoice) {
  const auto r = parse_selection("Reason: nothing safe\nColor: none", full_set());
  EXPECT_FALSE(r.choice);
  EXPECT_FALSE(r.fallback);
}

TEST(Parse, CaseAndDecorationTolerated) {
  EXPECT_EQ(parse_selection("**Reason:** ok\r\n**Color:** `Yellow`.", full_set()).choice, ProposalLabel::kRight);
  EXPECT_EQ(parse_selection("reason: x\ncolour: BLUE", full_set()).choice, ProposalLabel::kLeft);
  EXPECT_EQ(parse_selection("Color: #red", full_set()).choice, ProposalLabel::kRisky);
}

TEST(Parse, MalformedFallsBackToCenter) {
  for (std::string_view bad : {"", "green", "Reason: hmm", "Color: purple", "Color:", "\xff\xfe\x00garbage"}) {
    const auto r = parse_selection(bad, full_set());
    EXPECT_EQ(r.choice, ProposalLabel::kCenter) << bad;
    EXPECT_EQ(r.reason, kParseFailure);
    EXPECT_TRUE(r.fallback);
  }
}

TEST(Parse, ColorMissingFromSetFallsBack) {
  ProposalSet only_risky;
  only_risky.proposals = {straight(ProposalLabel::kRisky, 0, 0)};
  const auto r = parse_selection("Reason: x\nColor: green", only_risky);
  EXPECT_EQ(r.choice, ProposalLabel::kRisky);
  EXPECT_TRUE(r.fallback);
  EXPECT_FALSE(parse_selection("???", ProposalSet{}).choice);
}

TEST(Parse, IsTotalOnRandomBytes) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> byte(0, 255), len(0, 80);
  const std::vector<std::string> fragments = {"Color:", "Reason:", " green", " none", "\n", "blue", "colour :"};
  std::uniform_int_distribution<std::size_t> frag(0, fragments.size() - 1);
  ProposalSet partial;
  partial.proposals = {straight(ProposalLabel::kCenter, 0, 0), straight(ProposalLabel::kRight, 0, -0.6)};
  for (int i = 0; i < 20000; ++i) {
    std::string s;
    const int n = len(rng);
    for (int k = 0; k < n; ++k) {
      if (byte(rng) < 40) s += fragments[frag(rng)];
      else s += static_cast<char>(byte(rng));
    }
    const auto r = parse_selection(s, partial);
    if (r.choice) {
      EXPECT_TRUE(partial.find(*r.choice));
    }
    if (r.fallback) {
      EXPECT_EQ(r.choice, ProposalLabel::kCenter);
    }
  }
}

TEST(Parse, FormatRoundTrips) {
  const auto set = full_set(3);
  for (auto label : planner::kLabelPrecedence) {
    SelectionResult r{label, "some reason", 3, false};
    EXPECT_EQ(parse_selection(format_selection(r), set), r);
  }
  SelectionResult none{std::nullopt, "blocked", 3, false};
  EXPECT_EQ(format_selection(none), "Reason: blocked\nColor: none");
  EXPECT_EQ(parse_selection(format_selection(none), set), none);
  EXPECT_EQ(selection_from_json(to_json(none)), none);
}

TEST(MockSelect, StayRightPicksRightMirror) {
  const auto g = scenes::free_field(10.0, 4.0);
  ProposalSet set;
  set.proposals = {straight(ProposalLabel::kLeft, 2, 2.6), straight(ProposalLabel::kRight, 2, 1.4)};
  class Truth : public StripTruth {
    double lateral_offset(double, double y) const override { return y - 2.0; }
  } truth;
  BehaviorSpec b{"stay right", parse_oracle_rule("stay_right_of_centerline")};
  EXPECT_EQ(mock_select(set, g, b, truth).choice, ProposalLabel::kRight);
  b.rule = parse_oracle_rule("stay_left_of_centerline");
  EXPECT_EQ(mock_select(set, g, b, truth).choice, ProposalLabel::kLeft);
}

TEST(MockSelect, NoBehaviorIsCostArgmin) {
  auto g = scenes::free_field(10.0, 4.0);
  scenes::paint(g, 0.0, 10.0, 0.0, 2.0, 0.3);
  ProposalSet set;
  set.proposals = {straight(ProposalLabel::kCenter, 1.5, 1.5), straight(ProposalLabel::kLeft, 2.5, 2.5)};
  const auto r = mock_select(set, g, BehaviorSpec{}, StripTruth{});
  EXPECT_EQ(r.choice, ProposalLabel::kLeft);
  EXPECT_EQ(r.reason, kMockReason);
}

TEST(MockSelect, AvoidClassPrefersLongerCleanPath) {
  const auto g = scenes::free_field(10.0, 4.0);
  StripTruth truth;
  // Center crosses the paper (1 m in it); the left detour is 20 % longer.
  ProposalSet set;
  PlannedPath center = straight(ProposalLabel::kCenter, 2.0, 2.0);
  for (auto& w : center.waypoints) w.y -= 2.0;
  PlannedPath left;
  left.label = ProposalLabel::kLeft;
  const double bulge = std::sqrt(3.0 * 3.0 - 2.5 * 2.5);  // two legs of 3 m each
  left.waypoints = {make_pose(0, 0, 0), make_pose(2.5, bulge, 0), make_pose(5, 0, 0)};
  ASSERT_NEAR(planner::polyline_length(left.waypoints), 6.0, 1e-12);
  set.proposals = {center, left};
  BehaviorSpec b{"avoid paper", parse_oracle_rule("avoid_class:paper")};
  ASSERT_NEAR(violation_length(center.waypoints, b.rule, truth), 1.0, 0.011);
  ASSERT_EQ(violation_length(left.waypoints, b.rule, truth), 0.0);
  EXPECT_EQ(mock_select(set, g, b, truth).choice, ProposalLabel::kLeft);
}

TEST(MockSelect, PermutationInvariantWithPrecedenceTies) {
  const auto g = scenes::free_field(10.0, 4.0);
  auto set = full_set();
  for (auto& p : set.proposals)
    for (auto& w : p.waypoints) w.y += 2.0;
  std::mt19937_64 rng(3);
  const auto want = mock_select(set, g, BehaviorSpec{}, StripTruth{});
  EXPECT_EQ(want.choice, ProposalLabel::kCenter);
  for (int i = 0; i < 20; ++i) {
    std::shuffle(set.proposals.begin(), set.proposals.end(), rng);
    EXPECT_EQ(mock_select(set, g, BehaviorSpec{}, StripTruth{}), want);
  }
}

TEST(MockSelect, EmptySetChoosesNone) {
  const auto g = scenes::free_field(4.0, 4.0);
  EXPECT_FALSE(mock_select(ProposalSet{}, g, BehaviorSpec{}, StripTruth{}).choice);
}

namespace {

class ScriptedSelector : public PathSelector {
 public:
  explicit ScriptedSelector(std::string reply) : reply_(std::move(reply)) {}
  std::string select_path(const SelectionRequest& request) override {
    ++calls;
    last_history = request.history.size();
    if (reply_ == "throw") throw std::runtime_error("down");
    return reply_;
  }
  int calls = 0;
  std::size_t last_history = 0;

 private:
  std::string reply_;
};

OverlayImage blank_overlay() { return OverlayImage{Image<Rgb>(4, 4), {}}; }

}  // namespace

TEST(Reasoner, SecondRequestWithinIntervalIsDeferred) {
  auto provider = std::make_shared<ScriptedSelector>("Reason: a\nColor: green");
  Reasoner r(provider, {}, DispatchMode::kSimulated, 0.5);
  RobotModality m{"wheeled robot"};
  EXPECT_EQ(r.request_selection(blank_overlay(), full_set(1), m, {}, 0.0), RequestOutcome::kDispatched);
  EXPECT_EQ(r.request_selection(blank_overlay(), full_set(2), m, {}, 0.1), RequestOutcome::kDeferred);
  EXPECT_EQ(provider->calls, 1);
  r.poll(0.4);
  EXPECT_FALSE(r.active_selection());
  r.poll(0.5);
  ASSERT_TRUE(r.active_selection());
  EXPECT_EQ(r.active_selection()->choice, ProposalLabel::kCenter);
  EXPECT_EQ(r.active_selection()->frame_id, 1);
}

TEST(Reasoner, NoneReplyHoldsRobot) {
  auto provider = std::make_shared<ScriptedSelector>("Reason: blocked\nColor: none");
  Reasoner r(provider, {}, DispatchMode::kSimulated, 0.0);
  r.request_selection(blank_overlay(), full_set(), RobotModality{"legged"}, {}, 0.0);
  r.poll(0.0);
  ASSERT_TRUE(r.active_selection());
  EXPECT_FALSE(r.active_selection()->choice);
}

TEST(Reasoner, HistoryIsBounded) {
  auto provider = std::make_shared<ScriptedSelector>("Reason: a\nColor: blue");
  Reasoner r(provider, {4, 1.0, 10.0}, DispatchMode::kSimulated, 0.2);
  for (int i = 0; i < 10; ++i) {
    r.request_selection(blank_overlay(), full_set(i), RobotModality{"x"}, {}, i * 1.0);
    r.poll(i * 1.0 + 0.5);
    EXPECT_LE(r.history().size(), 4u);
  }
  EXPECT_EQ(r.history().size(), 4u);
  EXPECT_EQ(provider->last_history, 4u);
  EXPECT_EQ(r.history().back().result.frame_id, 9);
}

TEST(Reasoner, DispatchesRespectRateLimit) {
  auto provider = std::make_shared<ScriptedSelector>("Color: green");
  Reasoner r(provider, {4, 1.0, 10.0}, DispatchMode::kSimulated, 0.1);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> gap(0.0, 0.7);
  std::vector<double> times;
  double t = 0.0;
  for (int i = 0; i < 400; ++i) {
    t += gap(rng);
    if (r.request_selection(blank_overlay(), full_set(i), RobotModality{"x"}, {}, t) == RequestOutcome::kDispatched)
      times.push_back(t);
    r.poll(t);
  }
  for (double w : {0.5, 1.0, 2.5, 7.0}) {
    for (double start : times) {
      const auto n = std::count_if(times.begin(), times.end(), [&](double x) { return x >= start && x < start + w; });
      EXPECT_LE(n, static_cast<long>(std::ceil(w / 1.0)));
    }
  }
}

TEST(Reasoner, TimeoutWithoutSelectionFallsBackToCheapest) {
  auto provider = std::make_shared<ScriptedSelector>("Color: green");
  Reasoner r(provider, {4, 1.0, 2.0}, DispatchMode::kSimulated, 5.0);
  r.request_selection(blank_overlay(), full_set(), RobotModality{"x"}, {}, 0.0);
  r.poll(1.9);
  EXPECT_FALSE(r.active_selection());
  r.poll(2.0);
  ASSERT_TRUE(r.active_selection());
  EXPECT_EQ(r.active_selection()->choice, ProposalLabel::kLeft);  // cost 0.2, precedes right
  EXPECT_TRUE(r.active_selection()->fallback);
  const auto ex = r.drain_exchanges();
  ASSERT_EQ(ex.size(), 1u);
  EXPECT_EQ(ex[0].status, "timeout");
}

TEST(Reasoner, ProviderErrorKeepsPreviousSelection) {
  auto good = std::make_shared<ScriptedSelector>("Color: yellow");
  auto bad = std::make_shared<ScriptedSelector>("throw");
  struct Switch : PathSelector {
    std::shared_ptr<PathSelector> cur;
    std::string select_path(const SelectionRequest& q) override { return cur->select_path(q); }
  };
  auto sw = std::make_shared<Switch>();
  sw->cur = good;
  Reasoner r(sw, {}, DispatchMode::kSimulated, 0.0);
  r.request_selection(blank_overlay(), full_set(1), RobotModality{"x"}, {}, 0.0);
  r.poll(0.0);
  sw->cur = bad;
  r.request_selection(blank_overlay(), full_set(2), RobotModality{"x"}, {}, 1.0);
  r.poll(1.0);
  ASSERT_TRUE(r.active_selection());
  EXPECT_EQ(r.active_selection()->choice, ProposalLabel::kRight);
  EXPECT_EQ(r.active_selection()->frame_id, 1);
}

TEST(Reasoner, StaleReplyIsDiscardedInThreadMode) {
  struct Gate : PathSelector {
    std::mutex m;
    std::condition_variable cv;
    bool open = false;
    std::string select_path(const SelectionRequest& q) override {
      if (q.frame_id == 1) {
        std::unique_lock lock(m);
        cv.wait(lock, [&] { return open; });
        return "Color: blue";
      }
      return "Color: green";
    }
  };
  auto gate = std::make_shared<Gate>();
  Reasoner r(gate, {4, 0.0, 100.0}, DispatchMode::kThread);
  r.request_selection(blank_overlay(), full_set(1), RobotModality{"x"}, {}, 0.0);
  r.request_selection(blank_overlay(), full_set(2), RobotModality{"x"}, {}, 0.0);
  while (!r.active_selection()) {
    r.poll(0.0);
    std::this_thread::sleep_for(std::chrono::milliseconds(1));
  }
  EXPECT_EQ(r.active_selection()->frame_id, 2);
  {
    std::lock_guard lock(gate->m);
    gate->open = true;
  }
  gate->cv.notify_all();
  while (r.in_flight() > 0) {
    r.poll(0.0);
    std::this_thread::sleep_for(std::chrono::milliseconds(1));
  }
  EXPECT_EQ(r.active_selection()->frame_id, 2);
  EXPECT_EQ(r.active_selection()->choice, ProposalLabel::kCenter);
  const auto ex = r.drain_exchanges();
  ASSERT_EQ(ex.size(), 2u);
  EXPECT_EQ(ex[1].status, "stale");
}

TEST(Reasoner, PromptDigestCoversFields) {
  SelectionRequest a;
  a.modality_text = "wheeled";
  a.behavior_text = "stay left";
  SelectionRequest b = a;
  EXPECT_EQ(a.prompt_digest(), b.prompt_digest());
  b.behavior_text = "stay right";
  EXPECT_NE(a.prompt_digest(), b.prompt_digest());
}

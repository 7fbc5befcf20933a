#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include <json.hpp>

#include "ltlmcts/prior/prior.hpp"

using namespace ltlmcts;
using namespace ltlmcts::prior;
using options::OptionId;
using options::ordinal;

namespace {

OptionSet set_of(std::initializer_list<OptionId> ids) {
  OptionSet s = 0;
  for (auto o : ids) s = options::with(s, o);
  return s;
}

double total(const Distribution& p) {
  double t = 0.0;
  for (double x : p) t += x;
  return t;
}

FeatureVector random_features(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 3.0);
  FeatureVector f{};
  for (auto& x : f) x = n(rng);
  return f;
}

// Single-step episodes: A pays +200, B pays -200, features vary.
EpisodeDataset a_beats_b(std::size_t n) {
  std::mt19937_64 rng(5);
  EpisodeDataset d;
  for (std::size_t i = 0; i < n; ++i) {
    Transition t;
    t.features = random_features(rng);
    t.option = i % 2 == 0 ? OptionId::Default : OptionId::Stop;
    t.reward = t.option == OptionId::Default ? 200.0 : -200.0;
    t.terminal = true;
    d.push_back(t);
  }
  return d;
}

}  // namespace

TEST_CASE("uniform prior spreads mass evenly over the applicable options") {
  const auto p = OptionPrior::uniform().predict({}, set_of({OptionId::Default, OptionId::Follow, OptionId::Left,
                                                            OptionId::Stop}));
  for (auto o : {OptionId::Default, OptionId::Follow, OptionId::Left, OptionId::Stop}) {
    CHECK(p[ordinal(o)] == doctest::Approx(0.25));
  }
  CHECK(p[ordinal(OptionId::Right)] == 0.0);
}

TEST_CASE("manual prior normalizes the preference table") {
  const auto p = OptionPrior::manual().predict({}, set_of({OptionId::Default, OptionId::Wait, OptionId::Stop}));
  CHECK(p[ordinal(OptionId::Default)] == doctest::Approx(10.0 / 12.0));
  CHECK(p[ordinal(OptionId::Wait)] == doctest::Approx(1.0 / 12.0));
  CHECK(p[ordinal(OptionId::Stop)] == doctest::Approx(1.0 / 12.0));
}

TEST_CASE("learned prior with zero weights is uniform") {
  const auto p = OptionPrior::learned(QWeights{}, 1.0).predict({}, set_of({OptionId::Default, OptionId::Pass,
                                                                            OptionId::Right}));
  for (auto o : {OptionId::Default, OptionId::Pass, OptionId::Right}) CHECK(p[ordinal(o)] == doctest::Approx(1.0 / 3));
}

TEST_CASE("empty applicable set is refused") {
  CHECK_THROWS_AS(OptionPrior::uniform().predict({}, 0), EmptyApplicableSet);
  CHECK_THROWS_AS(OptionPrior::manual().predict({}, 0), EmptyApplicableSet);
  CHECK_THROWS_AS(OptionPrior::learned(QWeights{}).predict({}, 0), EmptyApplicableSet);
}

TEST_CASE("every variant yields a distribution and restriction keeps ratios") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n(0.0, 0.05);
  QWeights w{};
  for (auto& row : w) {
    for (auto& x : row) x = n(rng);
  }
  const std::vector<OptionPrior> priors{OptionPrior::uniform(), OptionPrior::manual(),
                                        OptionPrior::manual({3, 1, 2, 5, 1, 4, 1, 2}), OptionPrior::learned(w, 0.7)};
  for (int trial = 0; trial < 500; ++trial) {
    const auto f = random_features(rng);
    OptionSet full = static_cast<OptionSet>(rng() % 255 + 1);
    const auto kept = static_cast<OptionSet>(full & (rng() % 255 + 1));
    for (const auto& prior : priors) {
      const auto p = prior.predict(f, full);
      CHECK(total(p) == doctest::Approx(1.0).epsilon(1e-9));
      for (auto o : options::kAllOptions) {
        CHECK(p[ordinal(o)] >= 0.0);
        if (!options::contains(full, o)) CHECK(p[ordinal(o)] == 0.0);
      }
      if (kept == 0) continue;
      const auto q = prior.predict(f, kept);
      CHECK(total(q) == doctest::Approx(1.0).epsilon(1e-9));
      for (auto a : options::kAllOptions) {
        for (auto b : options::kAllOptions) {
          if (!options::contains(kept, a) || !options::contains(kept, b) || p[ordinal(b)] < 1e-12) continue;
          CHECK(q[ordinal(a)] / q[ordinal(b)] == doctest::Approx(p[ordinal(a)] / p[ordinal(b)]).epsilon(1e-9));
        }
      }
    }
  }
}

TEST_CASE("sampling follows the distribution and is reproducible") {
  Distribution p{};
  p[ordinal(OptionId::Default)] = 0.7;
  p[ordinal(OptionId::Follow)] = 0.3;
  Rng rng(2024);
  int defaults = 0;
  constexpr int n = 10000;
  for (int i = 0; i < n; ++i) defaults += sample(p, rng) == OptionId::Default;
  CHECK(std::abs(defaults / double(n) - 0.7) <= 0.02);

  Distribution certain{};
  certain[ordinal(OptionId::Pass)] = 1.0;
  Rng r0(1);
  for (int i = 0; i < 100; ++i) CHECK(sample(certain, r0) == OptionId::Pass);

  Rng a(77), b(77);
  const auto prior = OptionPrior::manual();
  const auto applicable = set_of({OptionId::Default, OptionId::Left, OptionId::Stop, OptionId::Follow});
  for (int i = 0; i < 200; ++i) CHECK(rollout_policy(prior, {}, applicable, a) == rollout_policy(prior, {}, applicable, b));
}

TEST_CASE("training separates a winning option from a losing one") {
  const auto data = a_beats_b(400);
  TrainingConfig cfg;
  cfg.temperature = 0.1;
  const auto prior = train_prior(data, cfg);
  CHECK(prior.kind() == PriorKind::Learned);
  for (const auto& t : data) {
    const auto q = prior.q_values(t.features);
    CHECK(q[ordinal(OptionId::Default)] > q[ordinal(OptionId::Stop)]);
    const auto p = prior.predict(t.features, set_of({OptionId::Default, OptionId::Stop}));
    CHECK(p[ordinal(OptionId::Default)] > 0.9);
  }
}

TEST_CASE("constant features reduce Q to the per-option mean return") {
  EpisodeDataset d;
  FeatureVector f{};
  f.fill(1.5);
  const std::vector<std::pair<OptionId, double>> rows{{OptionId::Default, 10.0}, {OptionId::Default, 30.0},
                                                       {OptionId::Left, -5.0}, {OptionId::Left, -7.0},
                                                       {OptionId::Left, -9.0}};
  for (auto [o, r] : rows) d.push_back({f, o, r, {}, 0, true});
  const auto q = train_prior(d).q_values(f);
  CHECK(q[ordinal(OptionId::Default)] == doctest::Approx(20.0).epsilon(1e-6));
  CHECK(q[ordinal(OptionId::Left)] == doctest::Approx(-7.0).epsilon(1e-6));
}

TEST_CASE("zero discount regresses on immediate returns only") {
  // Same data with and without a lucrative successor state must agree at gamma 0.
  std::mt19937_64 rng(3);
  EpisodeDataset plain, chained;
  for (int i = 0; i < 300; ++i) {
    Transition t;
    t.features = random_features(rng);
    t.option = i % 3 == 0 ? OptionId::Follow : OptionId::Default;
    t.reward = 2.0 * t.features[0] - t.features[5] + 1.0;
    t.terminal = true;
    plain.push_back(t);
    t.terminal = false;
    t.next = random_features(rng);
    t.next_applicable = set_of({OptionId::Default, OptionId::Follow});
    chained.push_back(t);
  }
  TrainingConfig cfg;
  cfg.gamma = 0.0;
  cfg.ridge = 0.0;
  const auto a = train_prior(plain, cfg);
  const auto b = train_prior(chained, cfg);
  for (const auto& t : plain) {
    const auto qa = a.q_values(t.features);
    const auto qb = b.q_values(t.features);
    CHECK(qa[ordinal(t.option)] == doctest::Approx(t.reward).epsilon(1e-6));
    CHECK(qb[ordinal(t.option)] == doctest::Approx(t.reward).epsilon(1e-6));
  }
}

TEST_CASE("training is deterministic and its loss never rises") {
  std::mt19937_64 rng(9);
  EpisodeDataset d;
  for (int i = 0; i < 500; ++i) {
    Transition t;
    t.features = random_features(rng);
    t.option = options::kAllOptions[rng() % 8];
    t.reward = t.features[1] - 0.5 * t.features[2];
    t.terminal = i % 4 == 0;
    t.next = random_features(rng);
    t.next_applicable = set_of({OptionId::Default, OptionId::Stop, OptionId::Wait});
    d.push_back(t);
  }
  TrainingConfig cfg;
  cfg.gamma = 0.5;
  TrainingReport r1, r2;
  const auto a = train_prior(d, cfg, &r1);
  const auto b = train_prior(d, cfg, &r2);
  CHECK(a.weights() == b.weights());
  CHECK(r1.loss == r2.loss);
  CHECK(r1.iterations >= 1);
  for (std::size_t i = 1; i < r1.loss.size(); ++i) CHECK(r1.loss[i] <= r1.loss[i - 1] * (1.0 + 1e-9) + 1e-12);
}

TEST_CASE("training refuses bad input") {
  CHECK_THROWS_AS(train_prior({}), std::invalid_argument);
  const auto data = a_beats_b(10);
  TrainingConfig cfg;
  cfg.gamma = 1.5;
  CHECK_THROWS_AS(train_prior(data, cfg), std::invalid_argument);
  cfg = {};
  cfg.ridge = 0.0;
  // Ten rows cannot pin 97 unpenalized weights.
  CHECK_THROWS_AS(train_prior(data, cfg), DegenerateRegression);
}

TEST_CASE("prior files round-trip and refuse a different feature schema") {
  const auto dir = std::filesystem::temp_directory_path() / "ltlmcts_prior_test";
  std::filesystem::create_directories(dir);
  const auto learned = train_prior(a_beats_b(400));
  for (const auto& prior : {OptionPrior::uniform(), OptionPrior::manual({1, 2, 3, 4, 5, 6, 7, 8}), learned}) {
    const auto path = dir / "prior.json";
    save_prior(prior, path);
    const auto back = load_prior(path);
    CHECK(back.kind() == prior.kind());
    CHECK(back.preferences() == prior.preferences());
    CHECK(back.weights() == prior.weights());
    CHECK(back.temperature() == prior.temperature());
  }

  auto j = nlohmann::json::parse(to_json(learned));
  j["feature_count"] = 88;
  CHECK_THROWS_AS(prior_from_json(j.dump()), PriorFormatError);
  j = nlohmann::json::parse(to_json(learned));
  j["feature_schema_version"] = 999;
  CHECK_THROWS_AS(prior_from_json(j.dump()), PriorFormatError);
  j = nlohmann::json::parse(to_json(learned));
  j["weights"]["Default"].erase(0);
  CHECK_THROWS_AS(prior_from_json(j.dump()), PriorFormatError);
  CHECK_THROWS_AS(prior_from_json("{not json"), PriorFormatError);

  CHECK(prior_from_spec("uniform").kind() == PriorKind::Uniform);
  CHECK(prior_from_spec("manual").kind() == PriorKind::Manual);
  save_prior(learned, dir / "learned.json");
  CHECK(prior_from_spec("learned:" + (dir / "learned.json").string()).weights() == learned.weights());
  CHECK_THROWS(prior_from_spec("greedy"));
  std::filesystem::remove_all(dir);
}

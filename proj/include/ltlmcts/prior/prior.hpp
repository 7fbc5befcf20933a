#pragma once

#include <array>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "ltlmcts/features/features.hpp"
#include "ltlmcts/options/options.hpp"
#include "ltlmcts/util/random.hpp"

namespace ltlmcts::prior {

using options::kOptionCount;
using options::OptionId;
using options::OptionSet;
using features::FeatureVector;

using Distribution = std::array<double, kOptionCount>;

enum class PriorKind { Uniform, Manual, Learned };

std::string_view to_string(PriorKind k);

// Intercept first, then one weight per feature.
inline constexpr std::size_t kWeightCount = features::kFeatureCount + 1;
using WeightVector = std::array<double, kWeightCount>;
using QWeights = std::array<WeightVector, kOptionCount>;

inline constexpr double kDefaultTemperature = 0.5;

class EmptyApplicableSet : public std::invalid_argument {
 public:
  EmptyApplicableSet() : std::invalid_argument("no applicable option") {}
};

class OptionPrior {
 public:
  static OptionPrior uniform();
  // Default 10, everything else 1 unless given.
  static OptionPrior manual();
  static OptionPrior manual(const std::array<double, kOptionCount>& preferences);
  static OptionPrior learned(const QWeights& weights, double temperature = kDefaultTemperature);

  PriorKind kind() const { return kind_; }
  double temperature() const { return temperature_; }
  const std::array<double, kOptionCount>& preferences() const { return preferences_; }
  const QWeights& weights() const { return weights_; }

  std::array<double, kOptionCount> q_values(const FeatureVector& f) const;

  // Probabilities over the applicable options; zero elsewhere.
  Distribution predict(const FeatureVector& f, OptionSet applicable) const;

 private:
  PriorKind kind_ = PriorKind::Uniform;
  std::array<double, kOptionCount> preferences_{};
  QWeights weights_{};
  double temperature_ = kDefaultTemperature;
};

// Draws from predict(); ties in cumulative mass go to the lowest ordinal.
OptionId rollout_policy(const OptionPrior& prior, const FeatureVector& f, OptionSet applicable, Rng& rng);
OptionId sample(const Distribution& p, Rng& rng);

struct Transition {
  FeatureVector features{};
  OptionId option = OptionId::Default;
  double reward = 0.0;  // return accumulated while the option ran
  FeatureVector next{};
  OptionSet next_applicable = 0;
  bool terminal = false;
};

using EpisodeDataset = std::vector<Transition>;

class DegenerateRegression : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TrainingConfig {
  int iterations = 20;
  double gamma = 0.95;
  double temperature = kDefaultTemperature;
  double ridge = 1e-3;
  double tolerance = 1e-6;  // stop once no weight moves more than this
};

struct TrainingReport {
  std::vector<double> loss;  // mean squared Bellman error per completed iteration
  int iterations = 0;
  bool early_stopped = false;
};

// Fitted Q-iteration with one ridge regression per option on standardized
// features; the intercept is not penalized.
OptionPrior train_prior(const EpisodeDataset& data, const TrainingConfig& cfg = {},
                        TrainingReport* report = nullptr);

class PriorFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string to_json(const OptionPrior& prior);
OptionPrior prior_from_json(const std::string& text);
void save_prior(const OptionPrior& prior, const std::filesystem::path& path);
OptionPrior load_prior(const std::filesystem::path& path);

// "uniform", "manual" or "learned:<path>".
OptionPrior prior_from_spec(const std::string& spec);

}  // namespace ltlmcts::prior

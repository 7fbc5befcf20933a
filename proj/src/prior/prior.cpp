#include "ltlmcts/prior/prior.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <json.hpp>
#include <sstream>

namespace ltlmcts::prior {

namespace {

constexpr int kFileVersion = 1;
constexpr std::string_view kFileFormat = "ltlmcts-option-prior";

Distribution normalized(const std::array<double, kOptionCount>& mass, OptionSet applicable) {
  if (applicable == 0) throw EmptyApplicableSet();
  Distribution p{};
  double total = 0.0;
  for (auto o : options::kAllOptions) {
    if (options::contains(applicable, o)) total += mass[options::ordinal(o)];
  }
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw std::domain_error("prior mass over the applicable options is not positive and finite");
  }
  for (auto o : options::kAllOptions) {
    if (options::contains(applicable, o)) p[options::ordinal(o)] = mass[options::ordinal(o)] / total;
  }
  return p;
}

double dot_weights(const WeightVector& w, const FeatureVector& f) {
  double q = w[0];
  for (std::size_t j = 0; j < f.size(); ++j) q += w[j + 1] * f[j];
  return q;
}

struct Standardizer {
  std::array<double, features::kFeatureCount> mean{};
  std::array<double, features::kFeatureCount> scale{};  // zero for constant columns

  explicit Standardizer(const EpisodeDataset& data) {
    const auto n = static_cast<double>(data.size());
    for (const auto& t : data) {
      for (std::size_t j = 0; j < mean.size(); ++j) mean[j] += t.features[j] / n;
    }
    std::array<double, features::kFeatureCount> var{};
    for (const auto& t : data) {
      for (std::size_t j = 0; j < mean.size(); ++j) {
        const double d = t.features[j] - mean[j];
        var[j] += d * d / n;
      }
    }
    for (std::size_t j = 0; j < mean.size(); ++j) {
      scale[j] = var[j] > 1e-24 ? 1.0 / std::sqrt(var[j]) : 0.0;
    }
  }

  double apply(const FeatureVector& f, std::size_t j) const { return (f[j] - mean[j]) * scale[j]; }

  WeightVector to_raw(const Eigen::VectorXd& beta) const {
    WeightVector w{};
    w[0] = beta[0];
    for (std::size_t j = 0; j < mean.size(); ++j) {
      const double wj = beta[static_cast<Eigen::Index>(j + 1)] * scale[j];
      w[j + 1] = wj;
      w[0] -= wj * mean[j];
    }
    return w;
  }
};

WeightVector fit_option(const EpisodeDataset& data, const std::vector<std::size_t>& rows,
                        const std::vector<double>& targets, const Standardizer& z, double ridge,
                        OptionId o) {
  const auto cols = static_cast<Eigen::Index>(kWeightCount);
  Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()), cols);
  Eigen::VectorXd y(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto ri = static_cast<Eigen::Index>(r);
    x(ri, 0) = 1.0;
    for (std::size_t j = 0; j < features::kFeatureCount; ++j) {
      x(ri, static_cast<Eigen::Index>(j + 1)) = z.apply(data[rows[r]].features, j);
    }
    y[ri] = targets[rows[r]];
  }
  Eigen::MatrixXd gram = x.transpose() * x;
  for (Eigen::Index j = 1; j < cols; ++j) gram(j, j) += ridge;
  const Eigen::VectorXd rhs = x.transpose() * y;
  if (ridge <= 0.0) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(gram);
    if (qr.rank() < cols) {
      throw DegenerateRegression("design matrix for option " + std::string(options::name(o)) +
                                 " has rank " + std::to_string(qr.rank()) + " < " +
                                 std::to_string(cols));
    }
    return z.to_raw(qr.solve(rhs));
  }
  Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  if (ldlt.info() != Eigen::Success) {
    throw DegenerateRegression("regression for option " + std::string(options::name(o)) + " failed");
  }
  return z.to_raw(ldlt.solve(rhs));
}

double best_next(const OptionPrior& q, const Transition& t) {
  if (t.terminal || t.next_applicable == 0) return 0.0;
  const auto values = q.q_values(t.next);
  double best = -std::numeric_limits<double>::infinity();
  for (auto o : options::kAllOptions) {
    if (options::contains(t.next_applicable, o)) best = std::max(best, values[options::ordinal(o)]);
  }
  return best;
}

}  // namespace

std::string_view to_string(PriorKind k) {
  switch (k) {
    case PriorKind::Uniform: return "uniform";
    case PriorKind::Manual: return "manual";
    case PriorKind::Learned: return "learned";
  }
  return "?";
}

OptionPrior OptionPrior::uniform() {
  OptionPrior p;
  p.kind_ = PriorKind::Uniform;
  p.preferences_.fill(1.0);
  return p;
}

OptionPrior OptionPrior::manual() {
  std::array<double, kOptionCount> prefs{};
  prefs.fill(1.0);
  prefs[options::ordinal(OptionId::Default)] = 10.0;
  return manual(prefs);
}

OptionPrior OptionPrior::manual(const std::array<double, kOptionCount>& preferences) {
  for (double x : preferences) {
    if (!(x > 0.0) || !std::isfinite(x)) throw std::invalid_argument("manual preferences must be positive");
  }
  OptionPrior p;
  p.kind_ = PriorKind::Manual;
  p.preferences_ = preferences;
  return p;
}

OptionPrior OptionPrior::learned(const QWeights& weights, double temperature) {
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw std::invalid_argument("softmax temperature must be positive");
  }
  OptionPrior p;
  p.kind_ = PriorKind::Learned;
  p.weights_ = weights;
  p.temperature_ = temperature;
  return p;
}

std::array<double, kOptionCount> OptionPrior::q_values(const FeatureVector& f) const {
  std::array<double, kOptionCount> q{};
  for (std::size_t o = 0; o < kOptionCount; ++o) q[o] = dot_weights(weights_[o], f);
  return q;
}

Distribution OptionPrior::predict(const FeatureVector& f, OptionSet applicable) const {
  if (applicable == 0) throw EmptyApplicableSet();
  if (kind_ != PriorKind::Learned) return normalized(preferences_, applicable);
  const auto q = q_values(f);
  double top = -std::numeric_limits<double>::infinity();
  for (auto o : options::kAllOptions) {
    if (options::contains(applicable, o)) top = std::max(top, q[options::ordinal(o)]);
  }
  std::array<double, kOptionCount> mass{};
  for (auto o : options::kAllOptions) {
    const auto i = options::ordinal(o);
    if (options::contains(applicable, o)) mass[i] = std::exp((q[i] - top) / temperature_);
  }
  return normalized(mass, applicable);
}

OptionId sample(const Distribution& p, Rng& rng) {
  const double u = unit_uniform(rng);
  double acc = 0.0;
  std::optional<OptionId> last;
  for (auto o : options::kAllOptions) {
    const double m = p[options::ordinal(o)];
    if (m <= 0.0) continue;
    acc += m;
    last = o;
    if (u < acc) return o;
  }
  if (!last) throw EmptyApplicableSet();
  return *last;
}

OptionId rollout_policy(const OptionPrior& prior, const FeatureVector& f, OptionSet applicable, Rng& rng) {
  return sample(prior.predict(f, applicable), rng);
}

OptionPrior train_prior(const EpisodeDataset& data, const TrainingConfig& cfg, TrainingReport* report) {
  if (data.empty()) throw std::invalid_argument("training dataset is empty");
  if (!(cfg.gamma >= 0.0 && cfg.gamma <= 1.0)) throw std::invalid_argument("discount must lie in [0, 1]");
  if (cfg.iterations < 1) throw std::invalid_argument("at least one iteration is required");
  if (cfg.ridge < 0.0) throw std::invalid_argument("ridge penalty must be non-negative");

  const Standardizer z(data);
  std::array<std::vector<std::size_t>, kOptionCount> rows;
  for (std::size_t i = 0; i < data.size(); ++i) rows[options::ordinal(data[i].option)].push_back(i);

  TrainingReport local;
  TrainingReport& rep = report ? *report : local;
  rep = {};

  OptionPrior current = OptionPrior::learned(QWeights{}, cfg.temperature);
  std::vector<double> targets(data.size());
  for (int it = 0; it < cfg.iterations; ++it) {
    for (std::size_t i = 0; i < data.size(); ++i) {
      targets[i] = data[i].reward + cfg.gamma * best_next(current, data[i]);
    }
    double mean_target = 0.0;
    for (double t : targets) mean_target += t / static_cast<double>(targets.size());

    QWeights next{};
    for (auto o : options::kAllOptions) {
      const auto& r = rows[options::ordinal(o)];
      if (r.empty()) {
        next[options::ordinal(o)][0] = mean_target;
        continue;
      }
      next[options::ordinal(o)] = fit_option(data, r, targets, z, cfg.ridge, o);
    }
    const OptionPrior candidate = OptionPrior::learned(next, cfg.temperature);

    double loss = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
      const double e = candidate.q_values(data[i].features)[options::ordinal(data[i].option)] - targets[i];
      loss += e * e / static_cast<double>(data.size());
    }
    if (!rep.loss.empty() && loss > rep.loss.back() * (1.0 + 1e-9) + 1e-12) {
      rep.early_stopped = true;
      break;
    }
    double moved = 0.0;
    for (std::size_t o = 0; o < kOptionCount; ++o) {
      for (std::size_t j = 0; j < kWeightCount; ++j) {
        moved = std::max(moved, std::abs(next[o][j] - current.weights()[o][j]));
      }
    }
    current = candidate;
    rep.loss.push_back(loss);
    rep.iterations = it + 1;
    if (moved <= cfg.tolerance) {
      rep.early_stopped = it + 1 < cfg.iterations;
      break;
    }
  }
  return current;
}

std::string to_json(const OptionPrior& prior) {
  nlohmann::json j;
  j["format"] = kFileFormat;
  j["version"] = kFileVersion;
  j["kind"] = to_string(prior.kind());
  j["feature_schema_version"] = features::kFeatureSchemaVersion;
  j["feature_count"] = features::kFeatureCount;
  if (prior.kind() == PriorKind::Learned) {
    j["temperature"] = prior.temperature();
    auto& w = j["weights"];
    for (auto o : options::kAllOptions) {
      const auto& v = prior.weights()[options::ordinal(o)];
      w[std::string(options::name(o))] = std::vector<double>(v.begin(), v.end());
    }
  } else {
    auto& p = j["preferences"];
    for (auto o : options::kAllOptions) p[std::string(options::name(o))] = prior.preferences()[options::ordinal(o)];
  }
  return j.dump(2);
}

OptionPrior prior_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw PriorFormatError(std::string("prior is not valid JSON: ") + e.what());
  }
  try {
    if (j.at("format").get<std::string>() != kFileFormat) throw PriorFormatError("not an option prior file");
    if (j.at("version").get<int>() != kFileVersion) throw PriorFormatError("unsupported prior file version");
    const int schema = j.at("feature_schema_version").get<int>();
    const auto count = j.at("feature_count").get<std::size_t>();
    if (schema != features::kFeatureSchemaVersion || count != features::kFeatureCount) {
      throw PriorFormatError("prior was trained on feature schema " + std::to_string(schema) + " with " +
                             std::to_string(count) + " features; this build uses schema " +
                             std::to_string(features::kFeatureSchemaVersion) + " with " +
                             std::to_string(features::kFeatureCount));
    }
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "uniform") return OptionPrior::uniform();
    if (kind == "manual") {
      std::array<double, kOptionCount> prefs{};
      for (auto o : options::kAllOptions) {
        prefs[options::ordinal(o)] = j.at("preferences").at(std::string(options::name(o))).get<double>();
      }
      return OptionPrior::manual(prefs);
    }
    if (kind != "learned") throw PriorFormatError("unknown prior kind '" + kind + "'");
    QWeights w{};
    for (auto o : options::kAllOptions) {
      const auto v = j.at("weights").at(std::string(options::name(o))).get<std::vector<double>>();
      if (v.size() != kWeightCount) {
        throw PriorFormatError("weight vector for " + std::string(options::name(o)) + " has " +
                               std::to_string(v.size()) + " entries, expected " + std::to_string(kWeightCount));
      }
      std::copy(v.begin(), v.end(), w[options::ordinal(o)].begin());
    }
    return OptionPrior::learned(w, j.at("temperature").get<double>());
  } catch (const nlohmann::json::exception& e) {
    throw PriorFormatError(std::string("malformed prior: ") + e.what());
  }
}

void save_prior(const OptionPrior& prior, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write prior to " + path.string());
  out << to_json(prior) << '\n';
  if (!out) throw std::runtime_error("failed writing prior to " + path.string());
}

OptionPrior load_prior(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read prior from " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return prior_from_json(ss.str());
}

OptionPrior prior_from_spec(const std::string& spec) {
  if (spec == "uniform") return OptionPrior::uniform();
  if (spec == "manual") return OptionPrior::manual();
  if (spec.rfind("learned:", 0) == 0) return load_prior(spec.substr(8));
  throw std::invalid_argument("prior must be uniform, manual or learned:<path>, got '" + spec + "'");
}

}  // namespace ltlmcts::prior

#pragma once

#include <span>
#include <vector>

#include "core/mlp.hpp"
#include "core/rng.hpp"
#include "core/vec.hpp"

namespace dimapg {

enum class HeadKind { gaussian, categorical };

// Network plus action head. For a gaussian head the network outputs the mean
// and a state-independent learnable log-std vector is appended to the
// parameter layout; for a categorical head the network outputs logits.
struct PolicySpec {
  MlpSpec net;
  HeadKind head = HeadKind::categorical;
  int action_dim = 1;  // gaussian: action dims, categorical: action count
  double initial_log_std = 0.0;

  void validate() const;
  bool operator==(const PolicySpec&) const = default;
};

struct ActionDistribution {
  HeadKind head;
  // gaussian
  std::vector<double> mean;
  std::vector<double> std;
  // categorical
  std::vector<double> probs;
  std::vector<double> log_probs;
};

// One action of a single agent. The head kind decides which field is used.
struct Action {
  std::vector<double> continuous;
  int discrete = 0;
};

// Maps observations to action distributions with exact log-density
// gradients. MlpPolicy is the production implementation; the test kit adds a
// tabular one for enumerable MDPs.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual int param_count() const = 0;
  virtual int obs_dim() const = 0;
  virtual HeadKind head() const = 0;
  virtual ParamVector init(RandomStream& rng) const = 0;
  virtual ActionDistribution distribution(const ParamVector& params,
                                          std::span<const double> obs) const = 0;
  // Adds scale * d log pi(action|obs) / d params into grad.
  virtual void grad_log_prob_accumulate(const ParamVector& params,
                                        std::span<const double> obs,
                                        const Action& action, double scale,
                                        ParamVector& grad) const = 0;

  ParamVector grad_log_prob(const ParamVector& params,
                            std::span<const double> obs,
                            const Action& action) const {
    ParamVector g(static_cast<std::size_t>(param_count()), 0.0);
    grad_log_prob_accumulate(params, obs, action, 1.0, g);
    return g;
  }
};

class MlpPolicy final : public Policy {
 public:
  explicit MlpPolicy(PolicySpec spec);

  const PolicySpec& spec() const { return spec_; }
  int param_count() const override;
  int obs_dim() const override { return spec_.net.input_dim; }
  HeadKind head() const override { return spec_.head; }
  ParamVector init(RandomStream& rng) const override;
  ActionDistribution distribution(const ParamVector& params,
                                  std::span<const double> obs) const override;
  void grad_log_prob_accumulate(const ParamVector& params,
                                std::span<const double> obs,
                                const Action& action, double scale,
                                ParamVector& grad) const override;

 private:
  PolicySpec spec_;
};

Action sample_action(const ActionDistribution& dist, RandomStream& rng);
double log_prob(const ActionDistribution& dist, const Action& action);

inline std::pair<Action, double> sample_and_logp(const ActionDistribution& d,
                                                 RandomStream& rng) {
  Action a = sample_action(d, rng);
  return {a, log_prob(d, a)};
}

}  // namespace dimapg

#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qtour/agent.hpp"
#include "qtour/ansatz.hpp"
#include "qtour/graph.hpp"

namespace qtour {

enum class GradientMethod { parameter_shift, central_difference };

GradientMethod gradient_from_string(std::string_view name);
std::string_view to_string(GradientMethod m);

inline constexpr double kCentralDifferenceStep = 1e-5;

// Q-learning hyperparameters. learning_rate <= 0 selects the per-family
// default (1e-2 for the two-parameter-per-layer family, 1e-3 otherwise).
struct TrainerConfig {
    int episodes_max = 5000;
    int solve_window = 100;      // episodes averaged by the stopping rule
    double solve_threshold = 1.05;
    int batch_size = 32;
    int memory_capacity = 10000;
    int target_update_interval = 30; // optimizer steps between target copies
    double learning_rate = 0.0;
    double discount = 0.9;
    double eps_start = 1.0;
    double eps_end = 0.01;
    double eps_decay = 0.99; // per-episode multiplicative decay
    int warm_up = 1000;      // stored transitions before updates begin
    double init_range = 0.1; // parameters start uniform in [-r, r]
    GradientMethod gradient = GradientMethod::parameter_shift;
    std::uint64_t seed = 0;
    int threads = 1;

    double learning_rate_for(AnsatzKind kind) const;
    double epsilon_at(int episode) const; // episode counts from 1
};

// Flat "key = value" text file; '#' starts a comment. Unknown keys are an
// error. Missing keys keep their defaults.
TrainerConfig load_trainer_config(const std::string& path);

// One environment step. States are stored compactly as an availability
// bitmask over the instance's nodes plus the last visited node.
struct Transition {
    int instance = 0;
    std::uint32_t avail = 0;
    int last = 0;
    int action = 0;
    double reward = 0.0;
    std::uint32_t next_avail = 0;
    int next_last = 0;
    bool done = false;
};

AnnotatedGraph annotated_from_mask(const WeightedGraph& g, std::uint32_t avail);
std::uint32_t mask_from_state(const AnnotatedGraph& s);

// Fixed-capacity FIFO buffer with uniform random sampling.
class ReplayMemory {
public:
    explicit ReplayMemory(std::size_t capacity);
    void push(const Transition& t);
    std::size_t size() const { return full_ ? buf_.size() : head_; }
    std::size_t capacity() const { return buf_.size(); }
    const Transition& sample_one(std::mt19937_64& rng) const;
    std::vector<Transition> sample(std::size_t count, std::mt19937_64& rng) const;

private:
    std::vector<Transition> buf_;
    std::size_t head_ = 0;
    bool full_ = false;
};

struct AdamOptimizer {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    long steps = 0;
    std::vector<double> m;
    std::vector<double> v;

    void reset(std::size_t n_params);
    void update(std::vector<double>& params, std::span<const double> grad);
};

// Q(s, a) for one stored state under the given parameters.
double q_value_single(const WeightedGraph& g, AnsatzKind kind, int depth,
                      std::span<const double> params, std::uint32_t avail, int last, int action);

// Bootstrap target: reward for terminal transitions, otherwise
// reward + discount * max_a' Q(next, a') under the target parameters.
double td_target(const Transition& t, const WeightedGraph& g, AnsatzKind kind, int depth,
                 std::span<const double> target_params, double discount);

// d Q(s, a) / d params. The shift rule shifts each driven gate's angle by
// +-pi/2 and weights the difference by coeff/2; gates with zero coefficient
// contribute nothing. Central differences move one parameter at a time by
// +-kCentralDifferenceStep.
std::vector<double> q_gradient(const WeightedGraph& g, AnsatzKind kind, int depth,
                               std::span<const double> params, std::uint32_t avail, int last,
                               int action, GradientMethod method);

// Mean squared TD error over a batch (targets from target_params are
// treated as constants).
double batch_loss(std::span<const Transition> batch, std::span<const Instance> instances,
                  AnsatzKind kind, int depth, std::span<const double> params,
                  std::span<const double> target_params, double discount, int threads = 1);

struct LossGradient {
    double loss = 0.0;
    std::vector<double> grad;
};

LossGradient loss_gradient(std::span<const Transition> batch, std::span<const Instance> instances,
                           AnsatzKind kind, int depth, std::span<const double> params,
                           std::span<const double> target_params, double discount,
                           GradientMethod method, int threads = 1);

struct EpisodeMetrics {
    int episode = 0;
    double ratio = 0.0;   // NaN when the instance has no known optimum
    double loss = 0.0;    // mean batch loss this episode; NaN before warm-up
    double epsilon = 0.0; // exploration rate used this episode
};

struct TrainResult {
    std::vector<double> params;
    AdamOptimizer optimizer;
    std::vector<EpisodeMetrics> history;
    bool solved = false;
    int episodes_run = 0;
};

// Deep-Q training over the instance set (episode e uses instance e mod N).
// Stops early once the stopping rule is met: mean ratio over the last
// solve_window episodes below solve_threshold, only available when every
// instance carries its optimal tour. Bit-reproducible for a fixed seed.
TrainResult train(const TrainerConfig& cfg, std::span<const Instance> instances,
                  AnsatzKind kind, int depth);

struct ValidationSummary {
    std::vector<double> ratios; // per instance, in input order
    double mean = 0.0;
    double median = 0.0;
    double q1 = 0.0;
    double q3 = 0.0;
    double min = 0.0;
    double max = 0.0;
};

// Greedy rollouts on every instance; optima are taken from the instances or
// recomputed exactly when absent.
ValidationSummary evaluate_policy(AnsatzKind kind, int depth, std::span<const double> params,
                                  std::span<const Instance> validation);

// Interpolating sample quantile (the box-plot convention): position
// q * (m - 1) in the sorted sample, linear between neighbors.
double quantile(std::span<const double> sorted_values, double q);

struct Checkpoint {
    AnsatzKind kind = AnsatzKind::eqc;
    int cities = 0;
    int depth = 1;
    int episode = 0;
    std::vector<double> params;
    AdamOptimizer optimizer;
};

// Versioned plain-text format with hex-float numbers: reload restores the
// exact bit pattern of every parameter.
void save_checkpoint(const std::string& path, const Checkpoint& c);
Checkpoint load_checkpoint(const std::string& path);

void write_metrics_csv(const std::string& path, std::span<const EpisodeMetrics> history);
void write_validation_csv(const std::string& path, std::span<const Instance> instances,
                          AnsatzKind kind, int depth, std::span<const double> params);

struct TrainSummary {
    AnsatzKind kind = AnsatzKind::eqc;
    int cities = 0;
    int depth = 1;
    int n_trainable = 0;
    std::uint64_t seed = 0;
    int episodes_run = 0;
    bool solved = false;
    double final_window_mean_ratio = 0.0; // NaN without ratios
    int window = 0;
    bool has_validation = false;
    ValidationSummary validation;
};

void write_summary_json(const std::string& path, const TrainSummary& s, const TrainerConfig& cfg);

} // namespace qtour

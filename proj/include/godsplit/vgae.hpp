#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "godsplit/rng.hpp"
#include "godsplit/structsim.hpp"

namespace godsplit {

struct VgaeConfig {
  int hidden_dim = 32;
  int latent_dim = 16;
  double learning_rate = 0.01;
  int epochs = 200;
  std::uint64_t seed = 42;
  double weight_init_scale = 1.0;  // multiplies the Xavier-uniform bound
  bool center_features = true;     // subtract column means before row normalisation

  // Throws ConfigError unless hidden_dim >= latent_dim >= 2, epochs >= 1 and
  // learning_rate > 0.
  void validate() const;
};

struct VgaeWeights {
  Eigen::MatrixXd w0;        // d x hidden
  Eigen::MatrixXd w_mu;      // hidden x latent
  Eigen::MatrixXd w_logvar;  // hidden x latent

  // Xavier-uniform draws from rng, in the order w0, w_mu, w_logvar.
  static VgaeWeights xavier(Eigen::Index input_dim, const VgaeConfig& config, Rng& rng);
};

struct TraceEntry {
  int epoch = 0;
  double loss = 0.0;
  double kl = 0.0;
};

struct VgaeModel {
  VgaeWeights weights;
  std::vector<TraceEntry> training_trace;
};

struct LatentMatrix {
  Eigen::MatrixXd z;  // posterior means, n x latent
};

// D^-1/2 (A + I) D^-1/2 with D the degree matrix of A + I.
Eigen::MatrixXd normalize_adjacency(const Adjacency& adjacency);

struct Encoding {
  Eigen::MatrixXd mu;
  Eigen::MatrixXd logvar;
};

// H = relu(Â X W0); mu = Â H W_mu; logvar = Â H W_logvar.
Encoding encode(const Eigen::MatrixXd& norm_adjacency, const Eigen::MatrixXd& features, const VgaeWeights& weights);

// mu + exp(logvar / 2) * eps with eps ~ N(0, 1) drawn row-major from rng.
Eigen::MatrixXd reparameterize(const Eigen::MatrixXd& mu, const Eigen::MatrixXd& logvar, Rng& rng);

// sigmoid(Z Z^T).
Eigen::MatrixXd decode(const Eigen::MatrixXd& z);

struct LossTerms {
  double total = 0.0;
  double reconstruction = 0.0;  // norm * weighted mean BCE
  double kl = 0.0;              // unscaled KL divergence (total adds kl / n)
  bool degenerate_graph = false;
};

// norm * BCE_w(A, reconstruction) + KL / n. Positive targets are weighted by
// (n^2 - sum A) / sum A and norm = n^2 / (2 (n^2 - sum A)); an edgeless graph
// uses weight 1 and norm 0.5 and sets degenerate_graph.
LossTerms loss(const Adjacency& adjacency, const Eigen::MatrixXd& reconstruction, const Eigen::MatrixXd& mu,
               const Eigen::MatrixXd& logvar);

struct Evaluation {
  LossTerms loss;
  VgaeWeights gradients;
  Eigen::MatrixXd mu;
};

// One forward and backward pass with fixed noise `eps` (n x latent). The loss
// is evaluated from logits, which matches loss() wherever sigmoid does not
// saturate.
Evaluation evaluate(const Adjacency& adjacency, const Eigen::MatrixXd& norm_adjacency,
                    const Eigen::MatrixXd& features, const VgaeWeights& weights, const Eigen::MatrixXd& eps);

// Each column minus its mean.
Eigen::MatrixXd center_columns(const Eigen::MatrixXd& features);

// Rows scaled to unit L2 norm; zero rows stay zero.
Eigen::MatrixXd l2_normalize_rows(const Eigen::MatrixXd& features);

struct TrainResult {
  VgaeModel model;
  LatentMatrix latent;
};

// Full-batch Adam (0.9, 0.999, 1e-8) for config.epochs epochs with one
// reparameterised sample per epoch. Features are column-centred (unless
// disabled) and L2-normalised per row first.
// Throws NonFiniteLoss with the failing epoch.
TrainResult train(const Adjacency& adjacency, const Eigen::MatrixXd& features, const VgaeConfig& config = {});

void write_trace_csv(const VgaeModel& model, std::ostream& out);

}  // namespace godsplit

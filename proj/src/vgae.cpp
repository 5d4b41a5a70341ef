#include "godsplit/vgae.hpp"

#include <cmath>
#include <ostream>

#include "godsplit/error.hpp"
#include "godsplit/numfmt.hpp"

namespace godsplit {

namespace {

double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

struct GraphWeighting {
  double pos_weight = 1.0;
  double norm = 0.5;
  bool degenerate = false;
};

GraphWeighting weighting(const Adjacency& a) {
  const double n2 = static_cast<double>(a.rows()) * static_cast<double>(a.rows());
  const double edges = a.sum();
  if (edges <= 0.0) return {1.0, 0.5, true};
  return {(n2 - edges) / edges, n2 / (2.0 * (n2 - edges)), false};
}

double kl_divergence(const Eigen::MatrixXd& mu, const Eigen::MatrixXd& logvar) {
  // -1/2 sum(1 + lv - mu^2 - e^lv) = 1/2 sum(mu^2 + (e^lv - 1 - lv)); both parts are >= 0.
  double kl = 0.0;
  for (Eigen::Index i = 0; i < mu.rows(); ++i) {
    for (Eigen::Index j = 0; j < mu.cols(); ++j) {
      const double lv = logvar(i, j);
      kl += 0.5 * (mu(i, j) * mu(i, j) + std::max(0.0, std::expm1(lv) - lv));
    }
  }
  return kl;
}

void adam_step(Eigen::MatrixXd& w, const Eigen::MatrixXd& g, Eigen::MatrixXd& m, Eigen::MatrixXd& v, int t,
               double lr) {
  constexpr double kBeta1 = 0.9;
  constexpr double kBeta2 = 0.999;
  constexpr double kEps = 1e-8;
  m = kBeta1 * m + (1.0 - kBeta1) * g;
  v = kBeta2 * v + (1.0 - kBeta2) * g.cwiseProduct(g);
  const double c1 = 1.0 - std::pow(kBeta1, t);
  const double c2 = 1.0 - std::pow(kBeta2, t);
  w.array() -= lr * (m.array() / c1) / ((v.array() / c2).sqrt() + kEps);
}

}  // namespace

void VgaeConfig::validate() const {
  if (latent_dim < 2) throw ConfigError("latent_dim must be at least 2");
  if (hidden_dim < latent_dim) throw ConfigError("hidden_dim must be at least latent_dim");
  if (epochs < 1) throw ConfigError("epochs must be at least 1");
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be positive");
  if (!(weight_init_scale > 0.0)) throw ConfigError("weight_init_scale must be positive");
}

VgaeWeights VgaeWeights::xavier(Eigen::Index input_dim, const VgaeConfig& config, Rng& rng) {
  auto draw = [&](Eigen::Index rows, Eigen::Index cols) {
    const double limit = config.weight_init_scale * std::sqrt(6.0 / static_cast<double>(rows + cols));
    Eigen::MatrixXd w(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) w(i, j) = rng.uniform(-limit, limit);
    return w;
  };
  VgaeWeights w;
  w.w0 = draw(input_dim, config.hidden_dim);
  w.w_mu = draw(config.hidden_dim, config.latent_dim);
  w.w_logvar = draw(config.hidden_dim, config.latent_dim);
  return w;
}

Eigen::MatrixXd normalize_adjacency(const Adjacency& adjacency) {
  const Eigen::Index n = adjacency.rows();
  Eigen::MatrixXd with_loops = adjacency + Eigen::MatrixXd::Identity(n, n);
  const Eigen::VectorXd inv_sqrt_degree = with_loops.rowwise().sum().array().rsqrt();
  return inv_sqrt_degree.asDiagonal() * with_loops * inv_sqrt_degree.asDiagonal();
}

Encoding encode(const Eigen::MatrixXd& norm_adjacency, const Eigen::MatrixXd& features, const VgaeWeights& weights) {
  if (norm_adjacency.rows() != norm_adjacency.cols() || norm_adjacency.rows() != features.rows())
    throw DimensionMismatch("adjacency is " + std::to_string(norm_adjacency.rows()) + "x" +
                            std::to_string(norm_adjacency.cols()) + " but features have " +
                            std::to_string(features.rows()) + " rows");
  if (features.cols() != weights.w0.rows())
    throw DimensionMismatch("features have " + std::to_string(features.cols()) + " columns, W0 expects " +
                            std::to_string(weights.w0.rows()));
  if (weights.w_mu.rows() != weights.w0.cols() || weights.w_logvar.rows() != weights.w0.cols() ||
      weights.w_mu.cols() != weights.w_logvar.cols())
    throw DimensionMismatch("inconsistent VGAE weight shapes");
  const Eigen::MatrixXd hidden = (norm_adjacency * features * weights.w0).cwiseMax(0.0);
  const Eigen::MatrixXd propagated = norm_adjacency * hidden;
  return {propagated * weights.w_mu, propagated * weights.w_logvar};
}

Eigen::MatrixXd reparameterize(const Eigen::MatrixXd& mu, const Eigen::MatrixXd& logvar, Rng& rng) {
  if (mu.rows() != logvar.rows() || mu.cols() != logvar.cols())
    throw DimensionMismatch("mu and logvar shapes differ");
  Eigen::MatrixXd z(mu.rows(), mu.cols());
  for (Eigen::Index i = 0; i < mu.rows(); ++i)
    for (Eigen::Index j = 0; j < mu.cols(); ++j) z(i, j) = mu(i, j) + std::exp(0.5 * logvar(i, j)) * rng.normal();
  return z;
}

Eigen::MatrixXd decode(const Eigen::MatrixXd& z) {
  Eigen::MatrixXd logits = z * z.transpose();
  return logits.unaryExpr([](double x) { return sigmoid(x); });
}

LossTerms loss(const Adjacency& adjacency, const Eigen::MatrixXd& reconstruction, const Eigen::MatrixXd& mu,
               const Eigen::MatrixXd& logvar) {
  const Eigen::Index n = adjacency.rows();
  if (reconstruction.rows() != n || reconstruction.cols() != n || mu.rows() != n || logvar.rows() != n)
    throw DimensionMismatch("loss inputs disagree on the node count");
  const auto w = weighting(adjacency);
  constexpr double kTiny = 1e-300;
  double bce = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double a = i == j ? 0.0 : adjacency(i, j);
      const double p = reconstruction(i, j);
      bce -= w.pos_weight * a * std::log(std::max(p, kTiny)) + (1.0 - a) * std::log(std::max(1.0 - p, kTiny));
    }
  }
  LossTerms out;
  out.reconstruction = w.norm * bce / static_cast<double>(n * n);
  out.kl = kl_divergence(mu, logvar);
  out.total = out.reconstruction + out.kl / static_cast<double>(n);
  out.degenerate_graph = w.degenerate;
  return out;
}

Evaluation evaluate(const Adjacency& adjacency, const Eigen::MatrixXd& norm_adjacency,
                    const Eigen::MatrixXd& features, const VgaeWeights& weights, const Eigen::MatrixXd& eps) {
  const Eigen::Index n = adjacency.rows();
  const double dn = static_cast<double>(n);

  // forward
  const Eigen::MatrixXd propagated_x = norm_adjacency * features;
  const Eigen::MatrixXd pre_hidden = propagated_x * weights.w0;
  const Eigen::MatrixXd hidden = pre_hidden.cwiseMax(0.0);
  const Eigen::MatrixXd propagated_h = norm_adjacency * hidden;
  const Eigen::MatrixXd mu = propagated_h * weights.w_mu;
  const Eigen::MatrixXd logvar = propagated_h * weights.w_logvar;
  const Eigen::MatrixXd stddev = (0.5 * logvar.array()).exp().matrix();
  const Eigen::MatrixXd z = mu + stddev.cwiseProduct(eps);
  const Eigen::MatrixXd logits = z * z.transpose();

  const auto w = weighting(adjacency);
  const double scale = w.norm / (dn * dn);
  double bce = 0.0;
  Eigen::MatrixXd d_logits(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double a = i == j ? 0.0 : adjacency(i, j);
      const double x = logits(i, j);
      bce += w.pos_weight * a * softplus(-x) + (1.0 - a) * softplus(x);
      d_logits(i, j) = scale * (sigmoid(x) * (w.pos_weight * a + 1.0 - a) - w.pos_weight * a);
    }
  }

  Evaluation out;
  out.loss.reconstruction = scale * bce;
  out.loss.kl = kl_divergence(mu, logvar);
  out.loss.total = out.loss.reconstruction + out.loss.kl / dn;
  out.loss.degenerate_graph = w.degenerate;
  out.mu = mu;

  // backward
  const Eigen::MatrixXd d_z = (d_logits + d_logits.transpose()) * z;
  const Eigen::MatrixXd d_mu = d_z + mu / dn;
  const Eigen::MatrixXd d_logvar =
      d_z.cwiseProduct(eps).cwiseProduct(0.5 * stddev) - (0.5 / dn) * (1.0 - logvar.array().exp()).matrix();
  out.gradients.w_mu = propagated_h.transpose() * d_mu;
  out.gradients.w_logvar = propagated_h.transpose() * d_logvar;
  const Eigen::MatrixXd d_propagated_h = d_mu * weights.w_mu.transpose() + d_logvar * weights.w_logvar.transpose();
  const Eigen::MatrixXd d_hidden = norm_adjacency.transpose() * d_propagated_h;
  const Eigen::MatrixXd d_pre_hidden = d_hidden.cwiseProduct((pre_hidden.array() > 0.0).cast<double>().matrix());
  out.gradients.w0 = propagated_x.transpose() * d_pre_hidden;
  return out;
}

Eigen::MatrixXd l2_normalize_rows(const Eigen::MatrixXd& features) {
  Eigen::MatrixXd out = features;
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    const double norm = out.row(i).norm();
    if (norm > 0.0) out.row(i) /= norm;
  }
  return out;
}

Eigen::MatrixXd center_columns(const Eigen::MatrixXd& features) {
  if (features.rows() == 0) return features;
  return features.rowwise() - features.colwise().mean();
}

TrainResult train(const Adjacency& adjacency, const Eigen::MatrixXd& features, const VgaeConfig& config) {
  config.validate();
  const Eigen::Index n = adjacency.rows();
  if (n < 2) throw DataError("VGAE training needs at least 2 methods");
  if (adjacency.cols() != n || features.rows() != n)
    throw DimensionMismatch("adjacency is " + std::to_string(n) + "x" + std::to_string(adjacency.cols()) +
                            " but features have " + std::to_string(features.rows()) + " rows");
  if (features.cols() < 1) throw DimensionMismatch("features have no columns");

  Rng rng(config.seed);
  const Eigen::MatrixXd x = l2_normalize_rows(config.center_features ? center_columns(features) : features);
  const Eigen::MatrixXd a_norm = normalize_adjacency(adjacency);

  TrainResult result;
  auto& weights = result.model.weights;
  weights = VgaeWeights::xavier(x.cols(), config, rng);
  VgaeWeights m{Eigen::MatrixXd::Zero(weights.w0.rows(), weights.w0.cols()),
                Eigen::MatrixXd::Zero(weights.w_mu.rows(), weights.w_mu.cols()),
                Eigen::MatrixXd::Zero(weights.w_logvar.rows(), weights.w_logvar.cols())};
  VgaeWeights v = m;

  result.model.training_trace.reserve(static_cast<std::size_t>(config.epochs));
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    Eigen::MatrixXd eps(n, config.latent_dim);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < config.latent_dim; ++j) eps(i, j) = rng.normal();
    const auto eval = evaluate(adjacency, a_norm, x, weights, eps);
    if (!std::isfinite(eval.loss.total)) throw NonFiniteLoss(epoch);
    result.model.training_trace.push_back({epoch, eval.loss.total, eval.loss.kl});
    adam_step(weights.w0, eval.gradients.w0, m.w0, v.w0, epoch, config.learning_rate);
    adam_step(weights.w_mu, eval.gradients.w_mu, m.w_mu, v.w_mu, epoch, config.learning_rate);
    adam_step(weights.w_logvar, eval.gradients.w_logvar, m.w_logvar, v.w_logvar, epoch, config.learning_rate);
  }
  result.latent.z = encode(a_norm, x, weights).mu;
  if (!result.latent.z.allFinite()) throw NonFiniteLoss(config.epochs);
  return result;
}

void write_trace_csv(const VgaeModel& model, std::ostream& out) {
  out << "epoch,loss\n";
  for (const auto& e : model.training_trace) out << e.epoch << ',' << format_double(e.loss) << '\n';
}

}  // namespace godsplit

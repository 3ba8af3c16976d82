#pragma once

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "patg/optimizer.hpp"
#include "patg/tape.hpp"

namespace patg {

struct GaussianPosterior {
  Eigen::VectorXd mu;
  Eigen::VectorXd log_var;

  Eigen::VectorXd sigma() const { return (log_var.array() / 2.0).exp().matrix(); }
};

struct PersonaEmbedding {
  Eigen::VectorXd z;
};

// Variational auto-encoder over bag-of-words vectors with an auxiliary
// sample discriminator. One instance serves both the user and the item
// side of a single text source (tips or reviews).
class AvaeModel {
 public:
  struct Dims {
    int vocab = 0;
    int hidden = 0;
    int latent = 0;
  };

  AvaeModel(const std::string& tag, Dims dims, Rng& rng);

  const Dims& dims() const { return dims_; }

  // Tape-level forward pieces used by training graphs.
  struct PosteriorVars {
    Var mu;
    Var log_var;
  };
  PosteriorVars encode_t(Tape& t, Var x);
  Var reparameterize_t(Tape& t, const PosteriorVars& p, const Eigen::VectorXd& eps);
  Var decode_t(Tape& t, Var z);
  Var discriminate_t(Tape& t, Var x_tilde);
  Var kl_loss_t(Tape& t, const PosteriorVars& p);
  Var reconstruction_loss_t(Tape& t, const Eigen::VectorXd& x, Var x_prime);

  // Plain evaluation with frozen parameters.
  GaussianPosterior encode(const Eigen::VectorXd& x) const;
  Eigen::VectorXd decode(const Eigen::VectorXd& z) const;
  double discriminate(const Eigen::VectorXd& x_tilde) const;
  // Deterministic embedding: z = mu, no sampling.
  PersonaEmbedding infer_embedding(const Eigen::VectorXd& x) const;

  std::vector<Parameter*> encoder_params();
  std::vector<Parameter*> decoder_params();
  std::vector<Parameter*> discriminator_params();
  std::vector<Parameter*> all_params();

  struct StepOptions {
    // When set, every sample in the batch reuses this noise vector and
    // this prior draw instead of sampling fresh ones.
    std::optional<Eigen::VectorXd> fixed_eps;
    std::optional<Eigen::VectorXd> fixed_prior;
    // Extra loss added to the encoder objective, built on the step's tape
    // from the per-sample latent variables (the tips-generation signal).
    std::function<Var(Tape&, const std::vector<Var>&)> extra_encoder_loss;
    bool adversarial = true;
  };

  struct StepReport {
    double kl = 0.0;
    double reconstruction = 0.0;
    double discriminator = 0.0;  // value of the three-term objective
    double adversarial_gen = 0.0;
    double extra = 0.0;
    std::vector<double> per_sample_kl;
    std::vector<double> per_sample_reconstruction;
  };

  // One pass of the persona-embedding learning loop: sample noise and a
  // prior draw per input, build all losses, then update encoder, decoder
  // and discriminator in that order.
  StepReport train_step(const std::vector<Eigen::VectorXd>& batch, Adadelta& opt, Rng& rng,
                        const StepOptions& options = {});

 private:
  std::string tag_;
  Dims dims_;

 public:
  // Encoder.
  Parameter enc_in_weight, enc_in_bias;
  Parameter enc_mean_weight, enc_mean_bias;
  Parameter enc_logvar_weight, enc_logvar_bias;
  // Decoder.
  Parameter dec_hidden_weight, dec_hidden_bias;
  Parameter dec_out_weight, dec_out_bias;
  // Sample discriminator.
  Parameter disc_hidden_weight, disc_hidden_bias;
  Parameter disc_out_weight, disc_out_bias;
};

// Closed-form KL divergence to the standard normal prior.
double kl_loss(const GaussianPosterior& p);
// Negated Bernoulli log-likelihood; x_prime entries must be probabilities.
double reconstruction_loss(const Eigen::VectorXd& x, const Eigen::VectorXd& x_prime);
// Three-term discriminator objective (to be ascended).
double discriminator_loss(double d_real, double d_reconstruction, double d_prior);
// -log D(x') for the encoder/decoder side of the minimax game.
double generator_adversarial_loss(double d_reconstruction);
PersonaEmbedding reparameterize(const GaussianPosterior& p, const Eigen::VectorXd& eps);

// Probability clamp applied inside every log term.
constexpr double kProbFloor = 1e-7;
double safe_log(double p);

}  // namespace patg

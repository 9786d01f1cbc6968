#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "nfbench/flow_table.hpp"
#include "nfbench/net.hpp"
#include "nfbench/resample.hpp"

namespace nfb::gen {

// Fixed training budget shared by all three families; mirrors the
// fixed-hyperparameter stance of the evaluation protocol.
struct TrainBudget {
    int epochs = 50;
    int batch = 256;
    double lr = 1e-3;
};

// --- C-VAE -------------------------------------------------------------------

struct CvaeConfig {
    std::vector<int> hidden = {128, 128};
    int latent_dim = 16;
    TrainBudget budget;
    std::uint64_t seed = 0;
};

struct CvaeModel {
    net::Mlp encoder;  // [x, onehot(y)] -> [mu, logvar]
    net::Mlp decoder;  // [z, onehot(y)] -> x_hat (sigmoid)
    int latent_dim = 0;
    int class_count = 0;
    int feature_dim = 0;
};

CvaeModel train_cvae(const FlowTable& train, const CvaeConfig& cfg,
                     std::vector<double>* loss_trace = nullptr);
Eigen::MatrixXd cvae_generate(const CvaeModel& model, int class_id, Eigen::Index count,
                              std::uint64_t seed);

// Mean over rows of sum_dims 0.5*(mu^2 + e^logvar - 1 - logvar); optional
// gradients wrt mu and logvar (already divided by the row count).
double gaussian_kl(const Eigen::MatrixXd& mu, const Eigen::MatrixXd& logvar,
                   Eigen::MatrixXd* grad_mu = nullptr, Eigen::MatrixXd* grad_logvar = nullptr);

// --- C-WGAN-GP ---------------------------------------------------------------

struct CwganConfig {
    std::vector<int> hidden = {128, 128};
    int noise_dim = 32;
    double lambda = 10.0;
    int n_critic = 5;
    // WGAN-GP customary Adam moments
    double beta1 = 0.5;
    double beta2 = 0.9;
    TrainBudget budget;
    std::uint64_t seed = 0;
};

struct CwganModel {
    net::Mlp generator;  // [z, onehot(y)] -> x_hat (sigmoid)
    net::Mlp critic;     // [x, onehot(y)] -> score (identity)
    int noise_dim = 0;
    int class_count = 0;
    int feature_dim = 0;
};

CwganModel train_cwgan(const FlowTable& train, const CwganConfig& cfg,
                       std::vector<double>* loss_trace = nullptr);
Eigen::MatrixXd cwgan_generate(const CwganModel& model, int class_id, Eigen::Index count,
                               std::uint64_t seed);

// lambda * mean_i (||d D/d x_i|| - 1)^2 evaluated at the rows of
// `interpolated` (features + one-hot columns; the norm runs over the first
// `feature_dim` input coordinates only). With accumulate set, the exact
// parameter gradient of the penalty is added to the critic's weight grads;
// requires ReLU/identity activations throughout the critic.
double gradient_penalty(net::Mlp& critic, const Eigen::MatrixXd& interpolated, int feature_dim,
                        double lambda, bool accumulate);

// --- C-DDPM ------------------------------------------------------------------

struct CddpmConfig {
    std::vector<int> hidden = {256, 256};
    int steps = 200;          // T
    double beta_min = 1e-4;
    double beta_max = 0.035;  // keeps alpha_bar_T below 0.05 at T=200
    int time_embed_dim = 32;
    TrainBudget budget;
    std::uint64_t seed = 0;
};

struct NoiseSchedule {
    Eigen::VectorXd beta;       // beta_1..beta_T (index 0 = t=1)
    Eigen::VectorXd alpha;      // 1 - beta
    Eigen::VectorXd alpha_bar;  // running product of alpha

    static NoiseSchedule linear(int steps, double beta_min, double beta_max);
};

struct CddpmModel {
    net::Mlp denoiser;  // [x_t, time_embedding(t), onehot(y)] -> predicted noise
    NoiseSchedule schedule;
    int time_embed_dim = 0;
    int class_count = 0;
    int feature_dim = 0;
};

CddpmModel train_cddpm(const FlowTable& train, const CddpmConfig& cfg,
                       std::vector<double>* loss_trace = nullptr);
Eigen::MatrixXd cddpm_generate(const CddpmModel& model, int class_id, Eigen::Index count,
                               std::uint64_t seed);

// Sinusoidal embedding of integer steps (1-based), one row per entry.
Eigen::MatrixXd time_embedding(const Eigen::VectorXi& t, int dim);

// --- family dispatch -----------------------------------------------------------

struct GenerativeConfigs {
    CvaeConfig cvae;
    CwganConfig cwgan;
    CddpmConfig cddpm;
};

class GenerativeModel {
public:
    GenerativeModel() = default;
    explicit GenerativeModel(CvaeModel m) : model_(std::move(m)) {}
    explicit GenerativeModel(CwganModel m) : model_(std::move(m)) {}
    explicit GenerativeModel(CddpmModel m) : model_(std::move(m)) {}

    // `count` rows of class `class_id`, every value in [0,1].
    Eigen::MatrixXd generate(int class_id, Eigen::Index count, std::uint64_t seed) const;

    int class_count() const;
    Oversampler kind() const;

    std::string to_json_text() const;
    static GenerativeModel from_json_text(const std::string& text);

private:
    std::variant<std::monostate, CvaeModel, CwganModel, CddpmModel> model_;
};

// Trains the requested family on `train` with the family seed from cfg
// replaced by `seed`.
GenerativeModel train_generative(const FlowTable& train, Oversampler kind,
                                 const GenerativeConfigs& cfgs, std::uint64_t seed,
                                 std::vector<double>* loss_trace = nullptr);

// Trains on `train`, then appends generated rows per minority class up to
// the majority count.
FlowTable generative_oversample(const FlowTable& train, Oversampler kind,
                                const GenerativeConfigs& cfgs, std::uint64_t seed);

}  // namespace nfb::gen

#include <algorithm>

#include "gen_common.hpp"
#include "nfbench/generative.hpp"

namespace nfb::gen {

using Eigen::Index;
using Eigen::MatrixXd;
using namespace detail;

double gaussian_kl(const MatrixXd& mu, const MatrixXd& logvar, MatrixXd* grad_mu,
                   MatrixXd* grad_logvar) {
    const double n = static_cast<double>(mu.rows());
    const Eigen::ArrayXXd var = logvar.array().exp();
    const double kl =
        0.5 * (mu.array().square() + var - 1.0 - logvar.array()).sum() / n;
    if (grad_mu) *grad_mu = mu / n;
    if (grad_logvar) *grad_logvar = (0.5 * (var - 1.0) / n).matrix();
    return kl;
}

CvaeModel train_cvae(const FlowTable& train, const CvaeConfig& cfg,
                     std::vector<double>* loss_trace) {
    if (train.rows() == 0) throw Error("train_cvae: empty table");
    const int d = static_cast<int>(train.dims());
    const int K = train.class_count();
    const int L = cfg.latent_dim;

    net::NetSpec enc_spec;
    enc_spec.dims.push_back(d + K);
    for (int h : cfg.hidden) enc_spec.dims.push_back(h);
    enc_spec.dims.push_back(2 * L);
    enc_spec.acts.assign(cfg.hidden.size(), net::Activation::ReLU);
    enc_spec.acts.push_back(net::Activation::Identity);
    enc_spec.init_seed = rng::mix(cfg.seed, rng::fnv1a("cvae-encoder"));

    net::NetSpec dec_spec;
    dec_spec.dims.push_back(L + K);
    for (int h : cfg.hidden) dec_spec.dims.push_back(h);
    dec_spec.dims.push_back(d);
    dec_spec.acts.assign(cfg.hidden.size(), net::Activation::ReLU);
    dec_spec.acts.push_back(net::Activation::Sigmoid);
    dec_spec.init_seed = rng::mix(cfg.seed, rng::fnv1a("cvae-decoder"));

    CvaeModel model{net::Mlp::build(enc_spec), net::Mlp::build(dec_spec), L, K, d};

    const MatrixXd labels_hot = one_hot(train.labels, K);
    rng::Engine eng(rng::mix(cfg.seed, rng::fnv1a("cvae-train")));

    for (int epoch = 0; epoch < cfg.budget.epochs; ++epoch) {
        BatchPlan plan(train.rows(), cfg.budget.batch, eng);
        double epoch_loss = 0.0;
        for (Index b = 0; b < plan.batch_count(); ++b) {
            const auto rows = plan.batch_rows(b);
            const Index n = static_cast<Index>(rows.size());
            const MatrixXd x = gather_rows(train.features, rows);
            const MatrixXd y = gather_rows(labels_hot, rows);

            net::Mlp::Cache enc_cache;
            const MatrixXd enc_out = model.encoder.forward(hcat(x, y), &enc_cache);
            const MatrixXd mu = enc_out.leftCols(L);
            const MatrixXd logvar = enc_out.rightCols(L);

            const MatrixXd eps = gaussian_matrix(eng, n, L);
            const MatrixXd sigma = (logvar.array() * 0.5).exp().matrix();
            const MatrixXd z = mu + sigma.cwiseProduct(eps);

            net::Mlp::Cache dec_cache;
            const MatrixXd recon = model.decoder.forward(hcat(z, y), &dec_cache);

            // reconstruction: per-sample squared error, averaged over the batch
            const MatrixXd diff = recon - x;
            const double recon_loss = diff.array().square().sum() / static_cast<double>(n);
            MatrixXd grad_mu_kl, grad_logvar_kl;
            const double kl = gaussian_kl(mu, logvar, &grad_mu_kl, &grad_logvar_kl);
            const double loss = recon_loss + kl;
            epoch_loss += loss * static_cast<double>(n);
            check_finite(loss, "train_cvae", epoch);

            model.encoder.params().zero_grads();
            model.decoder.params().zero_grads();

            const MatrixXd recon_grad = (2.0 / static_cast<double>(n)) * diff;
            const MatrixXd dec_input_grad = model.decoder.backward(dec_cache, recon_grad);
            const MatrixXd grad_z = dec_input_grad.leftCols(L);

            // z = mu + exp(logvar/2) * eps
            MatrixXd enc_grad(n, 2 * L);
            enc_grad.leftCols(L) = grad_z + grad_mu_kl;
            enc_grad.rightCols(L) =
                grad_z.cwiseProduct(sigma.cwiseProduct(eps)) * 0.5 + grad_logvar_kl;
            model.encoder.backward(enc_cache, enc_grad);

            net::adam_step(model.encoder.params(), cfg.budget.lr);
            net::adam_step(model.decoder.params(), cfg.budget.lr);
        }
        if (loss_trace) loss_trace->push_back(epoch_loss / static_cast<double>(train.rows()));
    }
    return model;
}

MatrixXd cvae_generate(const CvaeModel& model, int class_id, Index count, std::uint64_t seed) {
    if (class_id < 0 || class_id >= model.class_count)
        throw Error("cvae_generate: unknown class id " + std::to_string(class_id));
    if (count == 0) return MatrixXd(0, model.feature_dim);
    rng::Engine eng(rng::mix(seed, rng::fnv1a("cvae-sample")));
    const MatrixXd z = gaussian_matrix(eng, count, model.latent_dim);
    const MatrixXd y = constant_one_hot(class_id, model.class_count, count);
    return model.decoder.forward(hcat(z, y));
}

}  // namespace nfb::gen

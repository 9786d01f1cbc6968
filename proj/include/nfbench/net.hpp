#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "nfbench/errors.hpp"

namespace nfb::net {

enum class Activation { Identity, ReLU, Tanh, Sigmoid };

std::string to_string(Activation a);
Activation activation_from_string(const std::string& s);

// Named parameter tensor with its gradient and Adam moment buffers.
struct Tensor {
    std::string name;
    Eigen::MatrixXd value;
    Eigen::MatrixXd grad;
    Eigen::MatrixXd m;  // first moment
    Eigen::MatrixXd v;  // second moment
};

struct ParamStore {
    std::vector<Tensor> tensors;
    long step = 0;

    Tensor& add(const std::string& name, Eigen::Index rows, Eigen::Index cols);
    Tensor& at(const std::string& name);
    const Tensor& at(const std::string& name) const;
    void zero_grads();
    std::size_t parameter_count() const;
};

// Bias-corrected adaptive-moment update over every tensor in the store.
void adam_step(ParamStore& store, double lr, double beta1 = 0.9, double beta2 = 0.999,
               double eps = 1e-8);

struct NetSpec {
    std::vector<int> dims;             // input, hidden..., output
    std::vector<Activation> acts;      // one per layer output
    std::uint64_t init_seed = 0;

    void validate() const;
};

// Fully-connected network with explicit forward/backward. Weight layout:
// W_l is (fan_in x fan_out); activations are batches with one row per
// sample.
class Mlp {
public:
    struct Cache {
        std::vector<Eigen::MatrixXd> pre;    // pre-activations per layer
        std::vector<Eigen::MatrixXd> post;   // post[0] = input batch
    };

    static Mlp build(const NetSpec& spec);

    Eigen::MatrixXd forward(const Eigen::MatrixXd& batch, Cache* cache = nullptr) const;

    // Accumulates parameter gradients (call params().zero_grads() first)
    // and returns the gradient with respect to the input batch. When
    // `deltas` is given, the per-layer pre-activation gradients are stored
    // there (layer l at index l), as needed by double-backward passes.
    Eigen::MatrixXd backward(const Cache& cache, const Eigen::MatrixXd& upstream,
                             std::vector<Eigen::MatrixXd>* deltas = nullptr);

    // Same backward chain but leaves parameter gradients untouched; used
    // where only d(output)/d(input) is wanted.
    Eigen::MatrixXd input_gradient(const Cache& cache, const Eigen::MatrixXd& upstream,
                                   std::vector<Eigen::MatrixXd>* deltas = nullptr) const;

    int layer_count() const { return static_cast<int>(spec_.dims.size()) - 1; }
    int input_dim() const { return spec_.dims.front(); }
    int output_dim() const { return spec_.dims.back(); }
    const NetSpec& spec() const { return spec_; }
    ParamStore& params() { return params_; }
    const ParamStore& params() const { return params_; }
    Tensor& weight(int layer);
    Tensor& bias(int layer);
    const Tensor& weight(int layer) const;
    const Tensor& bias(int layer) const;

private:
    NetSpec spec_;
    ParamStore params_;
};

// --- losses -----------------------------------------------------------------

// Mean squared error over all elements; optional gradient wrt pred.
double mse_loss(const Eigen::MatrixXd& pred, const Eigen::MatrixXd& target,
                Eigen::MatrixXd* grad = nullptr);

// Row-mean softmax cross entropy with log-sum-exp stabilization.
double softmax_cross_entropy(const Eigen::MatrixXd& logits, const Eigen::VectorXi& labels,
                             Eigen::MatrixXd* grad = nullptr);

Eigen::MatrixXd softmax(const Eigen::MatrixXd& logits);

// --- checkpoints --------------------------------------------------------------

// Versioned JSON tensor dump with a shape manifest.
void save_params(const ParamStore& store, const std::filesystem::path& path);
ParamStore load_params(const std::filesystem::path& path);
std::string params_to_json_text(const ParamStore& store);
ParamStore params_from_json_text(const std::string& text);

}  // namespace nfb::net

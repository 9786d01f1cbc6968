#include "nfbench/net.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "nfbench/rng.hpp"

namespace nfb::net {

using Eigen::Index;
using Eigen::MatrixXd;
using nlohmann::json;

std::string to_string(Activation a) {
    switch (a) {
        case Activation::Identity: return "identity";
        case Activation::ReLU: return "relu";
        case Activation::Tanh: return "tanh";
        case Activation::Sigmoid: return "sigmoid";
    }
    return "?";
}

Activation activation_from_string(const std::string& s) {
    if (s == "identity") return Activation::Identity;
    if (s == "relu") return Activation::ReLU;
    if (s == "tanh") return Activation::Tanh;
    if (s == "sigmoid") return Activation::Sigmoid;
    throw Error("unknown activation '" + s + "'");
}

namespace {

MatrixXd apply_activation(Activation a, const MatrixXd& h) {
    switch (a) {
        case Activation::Identity: return h;
        case Activation::ReLU: return h.cwiseMax(0.0);
        case Activation::Tanh: return h.array().tanh().matrix();
        case Activation::Sigmoid:
            return (1.0 / (1.0 + (-h.array()).exp())).matrix();
    }
    return h;
}

// derivative as a function of the pre- and post-activation values
MatrixXd activation_grad(Activation a, const MatrixXd& pre, const MatrixXd& post) {
    switch (a) {
        case Activation::Identity: return MatrixXd::Ones(pre.rows(), pre.cols());
        case Activation::ReLU:
            return (pre.array() > 0.0).cast<double>().matrix();
        case Activation::Tanh:
            return (1.0 - post.array().square()).matrix();
        case Activation::Sigmoid:
            return (post.array() * (1.0 - post.array())).matrix();
    }
    return pre;
}

}  // namespace

Tensor& ParamStore::add(const std::string& name, Index rows, Index cols) {
    Tensor t;
    t.name = name;
    t.value = MatrixXd::Zero(rows, cols);
    t.grad = MatrixXd::Zero(rows, cols);
    t.m = MatrixXd::Zero(rows, cols);
    t.v = MatrixXd::Zero(rows, cols);
    tensors.push_back(std::move(t));
    return tensors.back();
}

Tensor& ParamStore::at(const std::string& name) {
    for (auto& t : tensors)
        if (t.name == name) return t;
    throw Error("no tensor named '" + name + "'");
}

const Tensor& ParamStore::at(const std::string& name) const {
    for (const auto& t : tensors)
        if (t.name == name) return t;
    throw Error("no tensor named '" + name + "'");
}

void ParamStore::zero_grads() {
    for (auto& t : tensors) t.grad.setZero();
}

std::size_t ParamStore::parameter_count() const {
    std::size_t n = 0;
    for (const auto& t : tensors) n += static_cast<std::size_t>(t.value.size());
    return n;
}

void adam_step(ParamStore& store, double lr, double beta1, double beta2, double eps) {
    store.step += 1;
    const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(store.step));
    const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(store.step));
    for (auto& t : store.tensors) {
        t.m = beta1 * t.m + (1.0 - beta1) * t.grad;
        t.v = beta2 * t.v + (1.0 - beta2) * t.grad.cwiseProduct(t.grad);
        const MatrixXd m_hat = t.m / bc1;
        const MatrixXd v_hat = t.v / bc2;
        t.value.array() -= lr * m_hat.array() / (v_hat.array().sqrt() + eps);
    }
}

void NetSpec::validate() const {
    if (dims.size() < 2) throw Error("NetSpec needs at least input and output dims");
    if (acts.size() != dims.size() - 1)
        throw Error("NetSpec needs one activation per layer");
    for (int d : dims)
        if (d <= 0) throw Error("NetSpec dims must be positive");
}

Mlp Mlp::build(const NetSpec& spec) {
    spec.validate();
    Mlp net;
    net.spec_ = spec;
    rng::Engine eng(spec.init_seed);
    for (std::size_t l = 0; l + 1 < spec.dims.size(); ++l) {
        const Index fan_in = spec.dims[l];
        const Index fan_out = spec.dims[l + 1];
        auto& w = net.params_.add("W" + std::to_string(l), fan_in, fan_out);
        const double limit = std::sqrt(6.0 / static_cast<double>(fan_in));
        for (Index i = 0; i < fan_in; ++i)
            for (Index j = 0; j < fan_out; ++j) w.value(i, j) = eng.uniform(-limit, limit);
        net.params_.add("b" + std::to_string(l), 1, fan_out);
    }
    return net;
}

Tensor& Mlp::weight(int layer) { return params_.at("W" + std::to_string(layer)); }
Tensor& Mlp::bias(int layer) { return params_.at("b" + std::to_string(layer)); }
const Tensor& Mlp::weight(int layer) const { return params_.at("W" + std::to_string(layer)); }
const Tensor& Mlp::bias(int layer) const { return params_.at("b" + std::to_string(layer)); }

MatrixXd Mlp::forward(const MatrixXd& batch, Cache* cache) const {
    if (batch.cols() != input_dim())
        throw Error("forward: batch has " + std::to_string(batch.cols()) + " columns, expected " +
                    std::to_string(input_dim()));
    if (cache) {
        cache->pre.clear();
        cache->post.clear();
        cache->post.push_back(batch);
    }
    MatrixXd a = batch;
    for (int l = 0; l < layer_count(); ++l) {
        const auto& w = params_.at("W" + std::to_string(l)).value;
        const auto& b = params_.at("b" + std::to_string(l)).value;
        MatrixXd h = a * w;
        h.rowwise() += b.row(0);
        a = apply_activation(spec_.acts[static_cast<std::size_t>(l)], h);
        if (cache) {
            cache->pre.push_back(std::move(h));
            cache->post.push_back(a);
        }
    }
    return a;
}

MatrixXd Mlp::backward(const Cache& cache, const MatrixXd& upstream,
                       std::vector<MatrixXd>* deltas) {
    if (cache.pre.size() != static_cast<std::size_t>(layer_count()))
        throw Error("backward: cache does not match network depth");
    if (deltas) deltas->assign(static_cast<std::size_t>(layer_count()), MatrixXd());
    MatrixXd grad = upstream;
    for (int l = layer_count() - 1; l >= 0; --l) {
        const auto& pre = cache.pre[static_cast<std::size_t>(l)];
        const auto& post = cache.post[static_cast<std::size_t>(l) + 1];
        MatrixXd delta =
            grad.cwiseProduct(activation_grad(spec_.acts[static_cast<std::size_t>(l)], pre, post));
        auto& w = params_.at("W" + std::to_string(l));
        auto& b = params_.at("b" + std::to_string(l));
        w.grad.noalias() += cache.post[static_cast<std::size_t>(l)].transpose() * delta;
        b.grad.row(0) += delta.colwise().sum();
        grad.noalias() = delta * w.value.transpose();
        if (deltas) (*deltas)[static_cast<std::size_t>(l)] = std::move(delta);
    }
    return grad;
}

MatrixXd Mlp::input_gradient(const Cache& cache, const MatrixXd& upstream,
                             std::vector<MatrixXd>* deltas) const {
    if (cache.pre.size() != static_cast<std::size_t>(layer_count()))
        throw Error("input_gradient: cache does not match network depth");
    if (deltas) deltas->assign(static_cast<std::size_t>(layer_count()), MatrixXd());
    MatrixXd grad = upstream;
    for (int l = layer_count() - 1; l >= 0; --l) {
        const auto& pre = cache.pre[static_cast<std::size_t>(l)];
        const auto& post = cache.post[static_cast<std::size_t>(l) + 1];
        MatrixXd delta =
            grad.cwiseProduct(activation_grad(spec_.acts[static_cast<std::size_t>(l)], pre, post));
        const auto& w = params_.at("W" + std::to_string(l));
        grad.noalias() = delta * w.value.transpose();
        if (deltas) (*deltas)[static_cast<std::size_t>(l)] = std::move(delta);
    }
    return grad;
}

// ---------------------------------------------------------------------------
// losses

double mse_loss(const MatrixXd& pred, const MatrixXd& target, MatrixXd* grad) {
    if (pred.rows() != target.rows() || pred.cols() != target.cols())
        throw Error("mse: shape mismatch");
    const MatrixXd diff = pred - target;
    const double n = static_cast<double>(diff.size());
    if (grad) *grad = (2.0 / n) * diff;
    return diff.array().square().sum() / n;
}

MatrixXd softmax(const MatrixXd& logits) {
    MatrixXd out(logits.rows(), logits.cols());
    for (Index i = 0; i < logits.rows(); ++i) {
        const double m = logits.row(i).maxCoeff();
        Eigen::ArrayXd e = (logits.row(i).array() - m).exp();
        out.row(i) = (e / e.sum()).matrix();
    }
    return out;
}

double softmax_cross_entropy(const MatrixXd& logits, const Eigen::VectorXi& labels,
                             MatrixXd* grad) {
    if (logits.rows() != labels.size()) throw Error("cross entropy: shape mismatch");
    const Index n = logits.rows();
    double loss = 0.0;
    if (grad) grad->resize(logits.rows(), logits.cols());
    for (Index i = 0; i < n; ++i) {
        const double m = logits.row(i).maxCoeff();
        const Eigen::ArrayXd shifted = logits.row(i).array() - m;
        const double lse = std::log(shifted.exp().sum());
        const int y = labels[i];
        if (y < 0 || y >= logits.cols()) throw Error("cross entropy: label out of range");
        loss += lse - shifted[y];
        if (grad) {
            Eigen::ArrayXd p = (shifted - lse).exp();
            p[y] -= 1.0;
            grad->row(i) = (p / static_cast<double>(n)).matrix();
        }
    }
    return loss / static_cast<double>(n);
}

// ---------------------------------------------------------------------------
// checkpoints

std::string params_to_json_text(const ParamStore& store) {
    json j;
    j["format"] = "nfbench-params";
    j["version"] = 1;
    j["step"] = store.step;
    json tensors = json::array();
    for (const auto& t : store.tensors) {
        json jt;
        jt["name"] = t.name;
        jt["shape"] = {t.value.rows(), t.value.cols()};
        std::vector<double> data;
        data.reserve(static_cast<std::size_t>(t.value.size()));
        for (Index i = 0; i < t.value.rows(); ++i)
            for (Index c = 0; c < t.value.cols(); ++c) data.push_back(t.value(i, c));
        jt["data"] = data;
        tensors.push_back(std::move(jt));
    }
    j["tensors"] = std::move(tensors);
    return j.dump();
}

ParamStore params_from_json_text(const std::string& text) {
    json j = json::parse(text);
    if (!j.contains("format") || j["format"] != "nfbench-params")
        throw Error("not a parameter checkpoint");
    if (j["version"].get<int>() != 1) throw Error("unsupported checkpoint version");
    ParamStore store;
    store.step = j.value("step", 0L);
    for (const auto& jt : j["tensors"]) {
        const auto shape = jt["shape"].get<std::vector<Index>>();
        auto& t = store.add(jt["name"].get<std::string>(), shape[0], shape[1]);
        const auto data = jt["data"].get<std::vector<double>>();
        if (static_cast<Index>(data.size()) != t.value.size())
            throw Error("checkpoint tensor size mismatch for " + t.name);
        std::size_t p = 0;
        for (Index i = 0; i < t.value.rows(); ++i)
            for (Index c = 0; c < t.value.cols(); ++c) t.value(i, c) = data[p++];
    }
    return store;
}

void save_params(const ParamStore& store, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write checkpoint " + path.string());
    out << params_to_json_text(store) << "\n";
}

ParamStore load_params(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open checkpoint " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return params_from_json_text(ss.str());
}

}  // namespace nfb::net

#include "edgecache/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "edgecache/errors.hpp"

namespace edgecache {

std::vector<Mlp::LayerView> Mlp::layout(const std::vector<int>& sizes) {
    std::vector<LayerView> layers;
    std::size_t offset = 0;
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
        LayerView v;
        v.in = sizes[l];
        v.out = sizes[l + 1];
        v.weights = offset;
        offset += static_cast<std::size_t>(v.in) * v.out;
        v.biases = offset;
        offset += v.out;
        layers.push_back(v);
    }
    return layers;
}

Mlp::Mlp(std::vector<int> layer_sizes, Rng& rng, bool zero_init_output)
    : layer_sizes_(std::move(layer_sizes)) {
    if (layer_sizes_.size() < 2)
        throw std::invalid_argument("network needs at least input and output sizes");
    for (int n : layer_sizes_)
        if (n <= 0) throw std::invalid_argument("layer sizes must be positive");
    layers_ = layout(layer_sizes_);
    const LayerView& last = layers_.back();
    params_.assign(last.biases + last.out, 0.0);
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        const LayerView& v = layers_[l];
        if (zero_init_output && l + 1 == layers_.size()) continue;
        const double bound = std::sqrt(6.0 / (v.in + v.out));
        for (std::size_t k = 0; k < static_cast<std::size_t>(v.in) * v.out; ++k)
            params_[v.weights + k] = rng.uniform(-bound, bound);
        // biases stay zero
    }
}

std::vector<double> Mlp::forward(std::span<const double> input) const {
    return forward_trace(input).activations.back();
}

Mlp::Trace Mlp::forward_trace(std::span<const double> input) const {
    if (static_cast<int>(input.size()) != input_size())
        throw std::invalid_argument("input size mismatch");
    Trace trace;
    trace.activations.reserve(layers_.size() + 1);
    trace.activations.emplace_back(input.begin(), input.end());
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        const LayerView& v = layers_[l];
        const std::vector<double>& prev = trace.activations.back();
        std::vector<double> next(v.out);
        for (int o = 0; o < v.out; ++o) {
            double acc = params_[v.biases + o];
            const double* row = params_.data() + v.weights + static_cast<std::size_t>(o) * v.in;
            for (int i = 0; i < v.in; ++i) acc += row[i] * prev[i];
            next[o] = (l + 1 == layers_.size()) ? acc : std::tanh(acc);
        }
        trace.activations.push_back(std::move(next));
    }
    return trace;
}

std::vector<double> Mlp::backward(const Trace& trace,
                                  std::span<const double> output_grad) const {
    if (trace.activations.size() != layers_.size() + 1)
        throw std::invalid_argument("trace does not match network depth");
    if (static_cast<int>(output_grad.size()) != output_size())
        throw std::invalid_argument("output gradient size mismatch");
    std::vector<double> grad(params_.size(), 0.0);
    std::vector<double> delta(output_grad.begin(), output_grad.end());
    for (std::size_t l = layers_.size(); l-- > 0;) {
        const LayerView& v = layers_[l];
        const std::vector<double>& below = trace.activations[l];
        for (int o = 0; o < v.out; ++o) {
            grad[v.biases + o] += delta[o];
            double* grow = grad.data() + v.weights + static_cast<std::size_t>(o) * v.in;
            for (int i = 0; i < v.in; ++i) grow[i] += delta[o] * below[i];
        }
        if (l == 0) break;
        std::vector<double> prev_delta(v.in, 0.0);
        for (int o = 0; o < v.out; ++o) {
            const double* row = params_.data() + v.weights + static_cast<std::size_t>(o) * v.in;
            for (int i = 0; i < v.in; ++i) prev_delta[i] += row[i] * delta[o];
        }
        // below is the tanh output of layer l-1: tanh' = 1 - tanh^2
        for (int i = 0; i < v.in; ++i) prev_delta[i] *= 1.0 - below[i] * below[i];
        delta = std::move(prev_delta);
    }
    return grad;
}

void Mlp::apply_step(std::span<const double> delta, double scale) {
    if (delta.size() != params_.size())
        throw std::invalid_argument("step size mismatch");
    for (std::size_t k = 0; k < params_.size(); ++k) {
        params_[k] += scale * delta[k];
        if (!std::isfinite(params_[k]))
            throw TrainingFault("parameter became non-finite during update");
    }
}

void Mlp::set_params(std::vector<double> params) {
    if (params.size() != params_.size())
        throw std::invalid_argument("parameter count mismatch");
    params_ = std::move(params);
}

nlohmann::json Mlp::save_state() const {
    return nlohmann::json{{"layer_sizes", layer_sizes_}, {"params", params_}};
}

void Mlp::load_state(const nlohmann::json& j) {
    if (j.at("layer_sizes").get<std::vector<int>>() != layer_sizes_)
        throw std::invalid_argument("network shape mismatch");
    set_params(j.at("params").get<std::vector<double>>());
}

std::vector<double> masked_softmax(std::span<const double> logits,
                                   std::span<const bool> mask) {
    if (logits.size() != mask.size())
        throw std::invalid_argument("mask size mismatch");
    double max_logit = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < logits.size(); ++k)
        if (mask[k]) max_logit = std::max(max_logit, logits[k]);
    if (!std::isfinite(max_logit))
        throw std::invalid_argument("softmax mask admits no action");
    std::vector<double> probs(logits.size(), 0.0);
    double total = 0.0;
    for (std::size_t k = 0; k < logits.size(); ++k) {
        if (!mask[k]) continue;
        probs[k] = std::exp(logits[k] - max_logit);
        total += probs[k];
    }
    for (double& p : probs) p /= total;
    return probs;
}

std::vector<double> masked_softmax(std::span<const double> logits) {
    if (logits.empty()) throw std::invalid_argument("softmax over no actions");
    const double max_logit = *std::max_element(logits.begin(), logits.end());
    std::vector<double> probs(logits.size());
    double total = 0.0;
    for (std::size_t k = 0; k < logits.size(); ++k) {
        probs[k] = std::exp(logits[k] - max_logit);
        total += probs[k];
    }
    for (double& p : probs) p /= total;
    return probs;
}

}  // namespace edgecache

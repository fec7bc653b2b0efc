#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "edgecache/random.hpp"

namespace edgecache {

/// Fully-connected network: tanh on hidden layers, linear output. All math in
/// double. Parameters are exposed as one flat vector (weights row-major then
/// biases, layer by layer) so gradients, optimizer steps, and checkpoints all
/// share a single layout.
class Mlp {
public:
    /// layer_sizes = {in, hidden..., out}. When zero_init_output is set the
    /// last layer's weights and biases start at exactly zero, so the initial
    /// output is zero for every input.
    Mlp(std::vector<int> layer_sizes, Rng& rng, bool zero_init_output = false);

    /// Unusable until assigned from a real network.
    Mlp() = default;

    std::vector<double> forward(std::span<const double> input) const;

    /// Intermediate activations kept for backprop: activations[0] is the
    /// input, activations.back() the linear output.
    struct Trace {
        std::vector<std::vector<double>> activations;
    };

    Trace forward_trace(std::span<const double> input) const;

    /// Backpropagates d(loss)/d(output) through a trace. Returns the gradient
    /// in flat parameter layout.
    std::vector<double> backward(const Trace& trace,
                                 std::span<const double> output_grad) const;

    /// params += scale * delta. Throws TrainingFault if any parameter goes
    /// non-finite.
    void apply_step(std::span<const double> delta, double scale);

    const std::vector<double>& params() const { return params_; }
    void set_params(std::vector<double> params);
    std::size_t n_params() const { return params_.size(); }
    const std::vector<int>& layer_sizes() const { return layer_sizes_; }
    int input_size() const { return layer_sizes_.front(); }
    int output_size() const { return layer_sizes_.back(); }

    nlohmann::json save_state() const;
    void load_state(const nlohmann::json& j);

private:
    struct LayerView {
        std::size_t weights;  // offset of row-major [out][in] block
        std::size_t biases;   // offset of [out] block
        int in;
        int out;
    };

    static std::vector<LayerView> layout(const std::vector<int>& sizes);

    std::vector<int> layer_sizes_;
    std::vector<LayerView> layers_;
    std::vector<double> params_;
};

/// Softmax over the unmasked entries; masked entries get probability zero.
/// Subtracts the max logit before exponentiating. Throws std::invalid_argument
/// when the mask admits nothing.
std::vector<double> masked_softmax(std::span<const double> logits,
                                   std::span<const bool> mask);

/// All-actions-valid softmax (same numerics, no mask).
std::vector<double> masked_softmax(std::span<const double> logits);

}  // namespace edgecache

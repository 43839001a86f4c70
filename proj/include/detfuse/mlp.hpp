#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace detfuse {

struct MlpConfig {
    std::vector<std::size_t> hidden = {100, 100};
    std::string hidden_activation = "tanh";  // tanh | sigmoid | relu
    std::size_t epochs = 200;
    double learning_rate = 1e-3;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    std::uint64_t seed = 1;
};

/// Fully connected binary classifier. Hidden layers use the configured
/// activation, the output unit is a sigmoid. weights[l] is row-major
/// [out x in] for layer l; biases[l] has one entry per output unit.
struct MlpModel {
    std::vector<std::size_t> layer_sizes;  // input, hidden..., 1
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> biases;
    std::string hidden_activation = "tanh";
    std::uint64_t seed = 1;
    double final_loss = 0.0;
};

/// Per-parameter gradients aligned with MlpModel::weights/biases, plus the
/// batch loss they were taken at.
struct MlpGradients {
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> biases;
    double loss = 0.0;
};

/// Seeded uniform (Glorot-style) initialization for the given input width.
MlpModel init_mlp(std::size_t input_dim, const MlpConfig& config);

/// Forward pass; output probability in (0,1). Throws on width mismatch.
double predict_mlp(const MlpModel& model, const std::vector<double>& x);

/// Mean binary cross-entropy over the batch and its gradients w.r.t. every
/// weight and bias (backpropagation). The finite-difference check in the
/// test suite runs against exactly this function.
MlpGradients mlp_loss_and_gradients(const MlpModel& model,
                                    const std::vector<std::vector<double>>& xs,
                                    const std::vector<bool>& ys);

/// Full-batch Adam for config.epochs steps. Deterministic given the seed.
/// Throws when the labels hold only one class (nothing separable to learn).
MlpModel train_mlp(const std::vector<std::vector<double>>& xs,
                   const std::vector<bool>& ys, const MlpConfig& config);

}  // namespace detfuse

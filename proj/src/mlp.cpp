#include "detfuse/mlp.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace detfuse {

namespace {

double activate(double z, const std::string& kind) {
    if (kind == "tanh") return std::tanh(z);
    if (kind == "sigmoid") return 1.0 / (1.0 + std::exp(-z));
    if (kind == "relu") return z > 0.0 ? z : 0.0;
    throw std::invalid_argument("unknown hidden activation: " + kind);
}

// Derivative in terms of the activation output a (cheaper than re-evaluating
// at z for the saturating units).
double activate_grad(double a, const std::string& kind) {
    if (kind == "tanh") return 1.0 - a * a;
    if (kind == "sigmoid") return a * (1.0 - a);
    if (kind == "relu") return a > 0.0 ? 1.0 : 0.0;
    throw std::invalid_argument("unknown hidden activation: " + kind);
}

// Numerically stable BCE expressed on the output logit z:
//   loss = max(z,0) - z*y + log(1 + exp(-|z|)),  dloss/dz = sigmoid(z) - y.
double bce_from_logit(double z, double y) {
    return (z > 0.0 ? z : 0.0) - z * y + std::log1p(std::exp(-std::fabs(z)));
}

struct Activations {
    // layer_values[0] = input, last entry = output logit (pre-sigmoid).
    std::vector<std::vector<double>> layer_values;
};

// Forward pass keeping every layer's post-activation values. The final
// layer's value is the raw logit.
Activations forward(const MlpModel& m, const std::vector<double>& x) {
    if (x.size() != m.layer_sizes.front()) {
        throw std::invalid_argument("mlp: input width does not match the model");
    }
    Activations acts;
    acts.layer_values.push_back(x);
    for (std::size_t l = 0; l + 1 < m.layer_sizes.size(); ++l) {
        const std::size_t in = m.layer_sizes[l];
        const std::size_t out = m.layer_sizes[l + 1];
        const bool is_output = (l + 2 == m.layer_sizes.size());
        std::vector<double> next(out);
        for (std::size_t o = 0; o < out; ++o) {
            double z = m.biases[l][o];
            const double* row = &m.weights[l][o * in];
            for (std::size_t i = 0; i < in; ++i) z += row[i] * acts.layer_values[l][i];
            next[o] = is_output ? z : activate(z, m.hidden_activation);
        }
        acts.layer_values.push_back(std::move(next));
    }
    return acts;
}

}  // namespace

MlpModel init_mlp(std::size_t input_dim, const MlpConfig& config) {
    if (input_dim == 0) throw std::invalid_argument("mlp: input width must be positive");
    MlpModel m;
    m.layer_sizes.push_back(input_dim);
    for (const std::size_t h : config.hidden) m.layer_sizes.push_back(h);
    m.layer_sizes.push_back(1);
    m.hidden_activation = config.hidden_activation;
    m.seed = config.seed;

    std::mt19937_64 rng(config.seed);
    for (std::size_t l = 0; l + 1 < m.layer_sizes.size(); ++l) {
        const std::size_t in = m.layer_sizes[l];
        const std::size_t out = m.layer_sizes[l + 1];
        const double bound = std::sqrt(6.0 / static_cast<double>(in + out));
        std::uniform_real_distribution<double> u(-bound, bound);
        std::vector<double> w(in * out);
        for (double& v : w) v = u(rng);
        m.weights.push_back(std::move(w));
        m.biases.push_back(std::vector<double>(out, 0.0));
    }
    return m;
}

double predict_mlp(const MlpModel& model, const std::vector<double>& x) {
    const auto acts = forward(model, x);
    const double z = acts.layer_values.back()[0];
    return 1.0 / (1.0 + std::exp(-z));
}

MlpGradients mlp_loss_and_gradients(const MlpModel& model,
                                    const std::vector<std::vector<double>>& xs,
                                    const std::vector<bool>& ys) {
    if (xs.empty() || xs.size() != ys.size()) {
        throw std::invalid_argument("mlp: inputs and labels must align and be nonempty");
    }
    MlpGradients g;
    g.weights.reserve(model.weights.size());
    g.biases.reserve(model.biases.size());
    for (std::size_t l = 0; l < model.weights.size(); ++l) {
        g.weights.push_back(std::vector<double>(model.weights[l].size(), 0.0));
        g.biases.push_back(std::vector<double>(model.biases[l].size(), 0.0));
    }

    const double inv_n = 1.0 / static_cast<double>(xs.size());
    for (std::size_t s = 0; s < xs.size(); ++s) {
        const auto acts = forward(model, xs[s]);
        const double y = ys[s] ? 1.0 : 0.0;
        const double z = acts.layer_values.back()[0];
        g.loss += bce_from_logit(z, y) * inv_n;

        // Backward pass; delta holds dloss/dz of the current layer.
        std::vector<double> delta = {(1.0 / (1.0 + std::exp(-z)) - y) * inv_n};
        for (std::size_t l = model.weights.size(); l-- > 0;) {
            const std::size_t in = model.layer_sizes[l];
            const std::size_t out = model.layer_sizes[l + 1];
            const auto& a_in = acts.layer_values[l];
            std::vector<double> delta_prev(in, 0.0);
            for (std::size_t o = 0; o < out; ++o) {
                g.biases[l][o] += delta[o];
                const double* row = &model.weights[l][o * in];
                double* grow = &g.weights[l][o * in];
                for (std::size_t i = 0; i < in; ++i) {
                    grow[i] += delta[o] * a_in[i];
                    delta_prev[i] += delta[o] * row[i];
                }
            }
            if (l > 0) {
                for (std::size_t i = 0; i < in; ++i) {
                    delta_prev[i] *= activate_grad(a_in[i], model.hidden_activation);
                }
            }
            delta = std::move(delta_prev);
        }
    }
    return g;
}

MlpModel train_mlp(const std::vector<std::vector<double>>& xs,
                   const std::vector<bool>& ys, const MlpConfig& config) {
    if (xs.empty() || xs.size() != ys.size()) {
        throw std::invalid_argument("mlp: inputs and labels must align and be nonempty");
    }
    bool any_pos = false, any_neg = false;
    for (const bool y : ys) (y ? any_pos : any_neg) = true;
    if (!any_pos || !any_neg) {
        throw std::invalid_argument("mlp: training set holds a single class");
    }

    MlpModel m = init_mlp(xs.front().size(), config);

    // Adam moment estimates, aligned with the parameter layout.
    std::vector<std::vector<double>> mw, vw, mb, vb;
    for (std::size_t l = 0; l < m.weights.size(); ++l) {
        mw.push_back(std::vector<double>(m.weights[l].size(), 0.0));
        vw.push_back(std::vector<double>(m.weights[l].size(), 0.0));
        mb.push_back(std::vector<double>(m.biases[l].size(), 0.0));
        vb.push_back(std::vector<double>(m.biases[l].size(), 0.0));
    }

    const double b1 = config.adam_beta1, b2 = config.adam_beta2;
    double b1t = 1.0, b2t = 1.0;
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        const MlpGradients g = mlp_loss_and_gradients(m, xs, ys);
        m.final_loss = g.loss;
        b1t *= b1;
        b2t *= b2;
        const auto step = [&](std::vector<double>& p, const std::vector<double>& grad,
                              std::vector<double>& mom, std::vector<double>& vel) {
            for (std::size_t i = 0; i < p.size(); ++i) {
                mom[i] = b1 * mom[i] + (1.0 - b1) * grad[i];
                vel[i] = b2 * vel[i] + (1.0 - b2) * grad[i] * grad[i];
                const double mhat = mom[i] / (1.0 - b1t);
                const double vhat = vel[i] / (1.0 - b2t);
                p[i] -= config.learning_rate * mhat / (std::sqrt(vhat) + config.adam_eps);
            }
        };
        for (std::size_t l = 0; l < m.weights.size(); ++l) {
            step(m.weights[l], g.weights[l], mw[l], vw[l]);
            step(m.biases[l], g.biases[l], mb[l], vb[l]);
        }
    }
    return m;
}

}  // namespace detfuse

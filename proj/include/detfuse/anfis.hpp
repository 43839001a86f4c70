#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace detfuse {

/// One first-order TSK rule. The IF part multiplies sigmoid memberships of
/// the referenced inputs (inverted antecedents use 1 - membership, "input is
/// weak"); the THEN part is linear in all inputs.
struct AnfisRule {
    struct Antecedent {
        std::size_t input = 0;
        bool invert = false;
    };
    std::vector<Antecedent> antecedents;
    std::vector<double> coeffs;  // one per input
    double bias = 0.0;
};

/// First-order Takagi-Sugeno-Kang fuzzy inference system over raw feature
/// values. Memberships are sigmoids centered at the per-class decision
/// thresholds with steepness 4/t (so a zero input fires ~0 and 2t fires ~1);
/// they stay frozen during training, only consequents learn.
struct AnfisModel {
    std::vector<std::string> classes;  // input order
    std::vector<double> centers;       // per input
    std::vector<double> steepness;     // per input
    std::vector<AnfisRule> rules;
    double output_threshold = 0.5;     // decision: output >= threshold
    std::uint64_t seed = 1;
    double final_loss = 0.0;
};

struct AnfisConfig {
    std::size_t epochs = 200;
    double learning_rate = 1e-3;
    std::uint64_t seed = 1;
    bool fit_output_threshold = true;
};

/// Gradients of the mean squared error w.r.t. the consequent parameters,
/// aligned with rules (coeffs[r][j], bias[r]), plus the batch loss.
struct AnfisGradients {
    std::vector<std::vector<double>> coeffs;
    std::vector<double> bias;
    double loss = 0.0;
};

/// Sigmoid membership 1 / (1 + exp(-k (v - center))).
double membership(double v, double center, double steepness);

/// Product of the rule's antecedent memberships; 1 for an antecedent-free
/// rule.
double rule_strength(const AnfisModel& m, const AnfisRule& rule, const std::vector<double>& x);

/// Weighted-average inference: sum(w_i f_i) / sum(w_i); 0 when no rule fires.
double anfis_forward(const AnfisModel& m, const std::vector<double>& x);

/// Build the rule base for the given component classes and decision
/// thresholds: one "class i exceeds its threshold" rule per class, plus an
/// "all components weak" guard rule when fewer than five classes are fused.
/// Consequents start at zero. Throws on a non-positive threshold.
AnfisModel make_anfis(const std::vector<std::string>& classes,
                      const std::vector<double>& thresholds);

AnfisGradients anfis_loss_and_gradients(const AnfisModel& m,
                                        const std::vector<std::vector<double>>& xs,
                                        const std::vector<bool>& ys);

/// Full-batch gradient descent on the consequents for config.epochs steps,
/// memberships frozen; then the output decision threshold is fit on the
/// training outputs (F1-optimal) unless disabled. Deterministic.
AnfisModel train_anfis(const std::vector<std::vector<double>>& xs,
                       const std::vector<bool>& ys,
                       const std::vector<std::string>& classes,
                       const std::vector<double>& thresholds, const AnfisConfig& config);

}  // namespace detfuse

#include "detfuse/anfis.hpp"

#include <cmath>
#include <stdexcept>

#include "detfuse/dta.hpp"

namespace detfuse {

double membership(double v, double center, double steepness) {
    return 1.0 / (1.0 + std::exp(-steepness * (v - center)));
}

double rule_strength(const AnfisModel& m, const AnfisRule& rule, const std::vector<double>& x) {
    double w = 1.0;
    for (const auto& a : rule.antecedents) {
        const double mu = membership(x[a.input], m.centers[a.input], m.steepness[a.input]);
        w *= a.invert ? 1.0 - mu : mu;
    }
    return w;
}

namespace {

void check_width(const AnfisModel& m, const std::vector<double>& x) {
    if (x.size() != m.classes.size()) {
        throw std::invalid_argument("anfis: input width does not match the model");
    }
}

double consequent(const AnfisRule& rule, const std::vector<double>& x) {
    double f = rule.bias;
    for (std::size_t j = 0; j < x.size(); ++j) f += rule.coeffs[j] * x[j];
    return f;
}

}  // namespace

double anfis_forward(const AnfisModel& m, const std::vector<double>& x) {
    check_width(m, x);
    double num = 0.0, den = 0.0;
    for (const auto& rule : m.rules) {
        const double w = rule_strength(m, rule, x);
        num += w * consequent(rule, x);
        den += w;
    }
    return den > 0.0 ? num / den : 0.0;
}

AnfisModel make_anfis(const std::vector<std::string>& classes,
                      const std::vector<double>& thresholds) {
    if (classes.empty() || classes.size() != thresholds.size()) {
        throw std::invalid_argument("anfis: classes and thresholds must align and be nonempty");
    }
    AnfisModel m;
    m.classes = classes;
    m.centers = thresholds;
    m.steepness.reserve(thresholds.size());
    for (const double t : thresholds) {
        if (!(t > 0.0)) {
            throw std::invalid_argument("anfis: membership center must be positive");
        }
        m.steepness.push_back(4.0 / t);
    }

    const std::size_t n = classes.size();
    for (std::size_t i = 0; i < n; ++i) {
        AnfisRule r;
        r.antecedents.push_back({i, false});
        r.coeffs.assign(n, 0.0);
        m.rules.push_back(std::move(r));
    }
    if (n < 5) {
        // Guard rule: every component weak. Covers the region where no
        // single-component rule fires strongly.
        AnfisRule guard;
        for (std::size_t i = 0; i < n; ++i) guard.antecedents.push_back({i, true});
        guard.coeffs.assign(n, 0.0);
        m.rules.push_back(std::move(guard));
    }
    return m;
}

AnfisGradients anfis_loss_and_gradients(const AnfisModel& m,
                                        const std::vector<std::vector<double>>& xs,
                                        const std::vector<bool>& ys) {
    if (xs.empty() || xs.size() != ys.size()) {
        throw std::invalid_argument("anfis: inputs and labels must align and be nonempty");
    }
    AnfisGradients g;
    g.coeffs.assign(m.rules.size(), std::vector<double>(m.classes.size(), 0.0));
    g.bias.assign(m.rules.size(), 0.0);

    const double inv_n = 1.0 / static_cast<double>(xs.size());
    std::vector<double> strengths(m.rules.size());
    for (std::size_t s = 0; s < xs.size(); ++s) {
        const auto& x = xs[s];
        check_width(m, x);
        double num = 0.0, den = 0.0;
        for (std::size_t r = 0; r < m.rules.size(); ++r) {
            strengths[r] = rule_strength(m, m.rules[r], x);
            num += strengths[r] * consequent(m.rules[r], x);
            den += strengths[r];
        }
        const double out = den > 0.0 ? num / den : 0.0;
        const double y = ys[s] ? 1.0 : 0.0;
        const double err = out - y;
        g.loss += err * err * inv_n;
        if (den <= 0.0) continue;

        // d(out)/d(coeff[r][j]) = (w_r / den) * x_j, d(out)/d(bias[r]) = w_r / den.
        const double scale = 2.0 * err * inv_n / den;
        for (std::size_t r = 0; r < m.rules.size(); ++r) {
            const double wr = strengths[r] * scale;
            g.bias[r] += wr;
            for (std::size_t j = 0; j < x.size(); ++j) g.coeffs[r][j] += wr * x[j];
        }
    }
    return g;
}

AnfisModel train_anfis(const std::vector<std::vector<double>>& xs,
                       const std::vector<bool>& ys,
                       const std::vector<std::string>& classes,
                       const std::vector<double>& thresholds, const AnfisConfig& config) {
    bool any_pos = false, any_neg = false;
    for (const bool y : ys) (y ? any_pos : any_neg) = true;
    if (!any_pos || !any_neg) {
        throw std::invalid_argument("anfis: training set holds a single class");
    }

    AnfisModel m = make_anfis(classes, thresholds);
    m.seed = config.seed;
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        const AnfisGradients g = anfis_loss_and_gradients(m, xs, ys);
        m.final_loss = g.loss;
        for (std::size_t r = 0; r < m.rules.size(); ++r) {
            m.rules[r].bias -= config.learning_rate * g.bias[r];
            for (std::size_t j = 0; j < m.classes.size(); ++j) {
                m.rules[r].coeffs[j] -= config.learning_rate * g.coeffs[r][j];
            }
        }
    }

    if (config.fit_output_threshold) {
        std::vector<double> outputs(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) outputs[i] = anfis_forward(m, xs[i]);
        m.output_threshold = fit_threshold(outputs, ys).threshold;
    }
    return m;
}

}  // namespace detfuse

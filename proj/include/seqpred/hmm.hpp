#pragma once

#include "seqpred/predictor.hpp"

namespace seqpred {

/// Hidden Markov model parameters. Rows of `transition` (n x n) and
/// `emission` (n x m) are stochastic; `initial` sums to one.
struct HmmModel {
    std::size_t n_states = 0;
    std::size_t n_symbols = 0;
    std::vector<double> initial;    // n
    std::vector<double> transition; // n x n, row-major
    std::vector<double> emission;   // n x m, row-major

    double& t(std::size_t i, std::size_t j) { return transition[i * n_states + j]; }
    double t(std::size_t i, std::size_t j) const { return transition[i * n_states + j]; }
    double& e(std::size_t i, std::size_t a) { return emission[i * n_symbols + a]; }
    double e(std::size_t i, std::size_t a) const { return emission[i * n_symbols + a]; }
};

enum class HmmRegularizer { none, additive };

struct HmmOptions {
    std::size_t n_states = 1;
    HmmRegularizer regularizer = HmmRegularizer::none;
    double epsilon = 0.0; // additive smoothing mass per matrix cell
    std::size_t max_iters = 100;
    double tol = 1e-4; // minimum per-event log-likelihood gain to keep going
    std::size_t restarts = 3;
    std::uint64_t seed = 1;
};

/// Baum-Welch-trained HMM predictor. Training runs EM from seeded Dirichlet
/// initializations (several restarts, best training likelihood wins) with
/// scaled forward/backward passes, so likelihoods of long sequences never
/// underflow. Prediction runs the scaled forward pass over the prefix, takes
/// one transition step and mixes the emission rows.
class HmmPredictor : public Predictor {
public:
    static std::unique_ptr<HmmPredictor> fit(const SequenceDatabase& train,
                                             std::shared_ptr<const Alphabet> alphabet,
                                             const HmmOptions& options);

    /// Wraps fixed parameters without training (tests, persistence).
    static std::unique_ptr<HmmPredictor> from_model(HmmModel model,
                                                    std::shared_ptr<const Alphabet> alphabet,
                                                    std::vector<double> fallback);

    std::string method() const override { return "hmm"; }
    std::string params_description() const override;

    NextSymbolDistribution predict(const SymbolSequence& prefix) const override;

    const HmmModel& model() const { return model_; }
    const std::vector<double>& fallback() const { return fallback_; }

    /// Training log-likelihood trajectory of the winning restart, one entry
    /// per EM iteration (the EM guarantee makes it non-decreasing).
    const std::vector<double>& training_log_likelihood_curve() const { return ll_curve_; }

    /// Total log-likelihood of a database under the fitted model (scaled
    /// forward pass; multiplicities respected).
    double log_likelihood(const SequenceDatabase& db) const;

private:
    HmmPredictor(std::shared_ptr<const Alphabet> alphabet, HmmModel model);

    HmmModel model_;
    std::vector<double> transition_T_; // column-major copy for the forward pass
    std::vector<double> fallback_;
    std::vector<double> ll_curve_;
    HmmOptions options_;

    void rebuild_transposed();
    // scaled forward pass; returns log-likelihood, leaves the final scaled
    // alpha row in `alpha`
    double forward(const std::vector<std::uint32_t>& word, std::vector<double>& alpha) const;
};

} // namespace seqpred

#include "seqpred/hmm.hpp"

#include <cmath>
#include <limits>

#include "seqpred/errors.hpp"
#include "seqpred/kernels.hpp"
#include "seqpred/rng.hpp"

namespace seqpred {

namespace {

// encode the database once: distinct words as alphabet indices with weights
struct EncodedLog {
    std::vector<std::vector<std::uint32_t>> words;
    std::vector<double> weights;
    double total_events = 0;
};

EncodedLog encode(const SequenceDatabase& db, const Alphabet& alphabet) {
    EncodedLog log;
    for (const auto& entry : db.entries()) {
        if (entry.word.empty()) continue;
        std::vector<std::uint32_t> encoded;
        encoded.reserve(entry.word.size());
        for (Symbol s : entry.word) {
            auto idx = alphabet.index_of(s);
            if (!idx) throw FitError("training symbol outside the alphabet: " + s.name());
            encoded.push_back(static_cast<std::uint32_t>(*idx));
        }
        log.words.push_back(std::move(encoded));
        log.weights.push_back(static_cast<double>(entry.count));
        log.total_events += static_cast<double>(entry.count * entry.word.size());
    }
    if (log.words.empty()) throw FitError("hmm training needs at least one nonempty sequence");
    return log;
}

std::vector<double> dirichlet_row(DetRng& rng, std::size_t n) {
    // symmetric Dirichlet(1): normalized unit exponentials
    std::vector<double> row(n);
    double total = 0.0;
    for (double& x : row) {
        double u = rng.next_double();
        x = -std::log(1.0 - u) + 1e-12;
        total += x;
    }
    for (double& x : row) x /= total;
    return row;
}

HmmModel random_model(DetRng& rng, std::size_t n_states, std::size_t n_symbols) {
    HmmModel model;
    model.n_states = n_states;
    model.n_symbols = n_symbols;
    model.initial = dirichlet_row(rng, n_states);
    model.transition.resize(n_states * n_states);
    model.emission.resize(n_states * n_symbols);
    for (std::size_t i = 0; i < n_states; ++i) {
        auto t_row = dirichlet_row(rng, n_states);
        std::copy(t_row.begin(), t_row.end(), model.transition.begin() + static_cast<std::ptrdiff_t>(i * n_states));
        auto e_row = dirichlet_row(rng, n_symbols);
        std::copy(e_row.begin(), e_row.end(), model.emission.begin() + static_cast<std::ptrdiff_t>(i * n_symbols));
    }
    return model;
}

struct Accumulators {
    std::vector<double> initial;
    std::vector<double> transition;
    std::vector<double> emission;

    explicit Accumulators(const HmmModel& model)
        : initial(model.n_states, 0.0),
          transition(model.n_states * model.n_states, 0.0),
          emission(model.n_states * model.n_symbols, 0.0) {}
};

// one scaled forward/backward sweep over a word, accumulating expected
// counts; returns the word's log-likelihood
double expectation_sweep(const HmmModel& model, const std::vector<double>& transition_T,
                         const std::vector<std::uint32_t>& word, double weight, Accumulators& acc) {
    const std::size_t n = model.n_states;
    const std::size_t len = word.size();

    std::vector<double> alpha(len * n);
    std::vector<double> scale(len);

    // forward
    double log_likelihood = 0.0;
    {
        double* a0 = alpha.data();
        for (std::size_t i = 0; i < n; ++i) a0[i] = model.initial[i] * model.e(i, word[0]);
        double c = kernels::sum(a0, n);
        if (c <= 0.0) c = std::numeric_limits<double>::min(); // symbol impossible everywhere
        kernels::scale(a0, n, 1.0 / c);
        scale[0] = c;
        log_likelihood += std::log(c);
    }
    for (std::size_t t = 1; t < len; ++t) {
        const double* prev = alpha.data() + (t - 1) * n;
        double* cur = alpha.data() + t * n;
        for (std::size_t j = 0; j < n; ++j) {
            cur[j] = kernels::dot(prev, transition_T.data() + j * n, n) * model.e(j, word[t]);
        }
        double c = kernels::sum(cur, n);
        if (c <= 0.0) c = std::numeric_limits<double>::min();
        kernels::scale(cur, n, 1.0 / c);
        scale[t] = c;
        log_likelihood += std::log(c);
    }

    // backward, accumulating on the fly
    std::vector<double> beta(n, 1.0);
    std::vector<double> beta_next(n);
    std::vector<double> tmp(n);

    // emission expectations for the last position: gamma_T = alpha_T (beta = 1)
    {
        const double* a_last = alpha.data() + (len - 1) * n;
        for (std::size_t i = 0; i < n; ++i) {
            acc.emission[i * model.n_symbols + word[len - 1]] += weight * a_last[i];
        }
    }

    for (std::size_t t = len - 1; t-- > 0;) {
        const double* a_t = alpha.data() + t * n;
        const std::uint32_t next_symbol = word[t + 1];
        // tmp[j] = E(j, x_{t+1}) * beta_{t+1}(j) / c_{t+1}
        for (std::size_t j = 0; j < n; ++j) tmp[j] = model.e(j, next_symbol) * beta[j] / scale[t + 1];
        // transition expectations: xi_t(i,j) = alpha_t(i) T(i,j) tmp[j]
        for (std::size_t i = 0; i < n; ++i) {
            kernels::add_scaled_product(acc.transition.data() + i * n, weight * a_t[i],
                                        model.transition.data() + i * n, tmp.data(), n);
        }
        // beta_t(i) = sum_j T(i,j) tmp[j]
        for (std::size_t i = 0; i < n; ++i) {
            beta_next[i] = kernels::dot(model.transition.data() + i * n, tmp.data(), n);
        }
        beta.swap(beta_next);
        // gamma_t(i) = alpha_t(i) beta_t(i); emission and (t==0) initial expectations
        for (std::size_t i = 0; i < n; ++i) {
            double gamma = a_t[i] * beta[i];
            acc.emission[i * model.n_symbols + word[t]] += weight * gamma;
            if (t == 0) acc.initial[i] += weight * gamma;
        }
    }
    if (len == 1) {
        for (std::size_t i = 0; i < n; ++i) acc.initial[i] += weight * alpha[i];
    }
    return log_likelihood;
}

void renormalize_row(double* row, std::size_t n, double epsilon, const double* keep_old) {
    double total = kernels::sum(row, n) + epsilon * static_cast<double>(n);
    if (total <= 0.0) {
        // state never visited: keep its previous parameters
        std::copy(keep_old, keep_old + n, row);
        return;
    }
    for (std::size_t i = 0; i < n; ++i) row[i] = (row[i] + epsilon) / total;
}

} // namespace

HmmPredictor::HmmPredictor(std::shared_ptr<const Alphabet> alphabet, HmmModel model)
    : Predictor(std::move(alphabet)), model_(std::move(model)) {
    rebuild_transposed();
}

void HmmPredictor::rebuild_transposed() {
    const std::size_t n = model_.n_states;
    transition_T_.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) transition_T_[j * n + i] = model_.t(i, j);
    }
}

std::string HmmPredictor::params_description() const {
    std::string out = "states=" + std::to_string(model_.n_states);
    if (options_.regularizer == HmmRegularizer::additive) {
        out += ";reg=additive(" + std::to_string(options_.epsilon) + ")";
    } else {
        out += ";reg=none";
    }
    return out;
}

std::unique_ptr<HmmPredictor> HmmPredictor::fit(const SequenceDatabase& train,
                                                std::shared_ptr<const Alphabet> alphabet,
                                                const HmmOptions& options) {
    if (options.n_states < 1) throw FitError("hmm needs at least one hidden state");
    if (options.restarts < 1) throw FitError("hmm needs at least one restart");
    EncodedLog log = encode(train, *alphabet);
    const std::size_t n = options.n_states;
    const std::size_t m = alphabet->size();
    const double epsilon = options.regularizer == HmmRegularizer::additive ? options.epsilon : 0.0;

    HmmModel best_model;
    std::vector<double> best_curve;
    double best_ll = -std::numeric_limits<double>::infinity();

    for (std::size_t restart = 0; restart < options.restarts; ++restart) {
        DetRng rng(derive_seed(options.seed, restart));
        HmmModel model = random_model(rng, n, m);
        std::vector<double> transition_T(n * n);
        std::vector<double> curve;
        double previous = -std::numeric_limits<double>::infinity();

        for (std::size_t iter = 0; iter < options.max_iters; ++iter) {
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) transition_T[j * n + i] = model.t(i, j);
            }
            Accumulators acc(model);
            double ll = 0.0;
            double total_weight = 0.0;
            for (std::size_t w = 0; w < log.words.size(); ++w) {
                ll += log.weights[w] *
                      expectation_sweep(model, transition_T, log.words[w], log.weights[w], acc);
                total_weight += log.weights[w];
            }
            curve.push_back(ll);

            // maximization
            HmmModel next = model;
            next.initial = acc.initial;
            {
                double total = kernels::sum(next.initial.data(), n);
                if (total > 0.0) kernels::scale(next.initial.data(), n, 1.0 / total);
                else next.initial = model.initial;
            }
            next.transition = acc.transition;
            next.emission = acc.emission;
            for (std::size_t i = 0; i < n; ++i) {
                renormalize_row(next.transition.data() + i * n, n, epsilon,
                                model.transition.data() + i * n);
                renormalize_row(next.emission.data() + i * m, m, epsilon,
                                model.emission.data() + i * m);
            }
            model = std::move(next);

            double per_event_gain = (ll - previous) / log.total_events;
            if (iter > 0 && per_event_gain < options.tol) break;
            previous = ll;
        }

        double final_ll = curve.empty() ? -std::numeric_limits<double>::infinity() : curve.back();
        if (final_ll > best_ll) {
            best_ll = final_ll;
            best_model = std::move(model);
            best_curve = std::move(curve);
        }
    }

    auto predictor =
        std::unique_ptr<HmmPredictor>(new HmmPredictor(alphabet, std::move(best_model)));
    predictor->fallback_ = proportional_frequencies(train, *alphabet);
    predictor->ll_curve_ = std::move(best_curve);
    predictor->options_ = options;
    return predictor;
}

std::unique_ptr<HmmPredictor> HmmPredictor::from_model(HmmModel model,
                                                       std::shared_ptr<const Alphabet> alphabet,
                                                       std::vector<double> fallback) {
    if (model.n_symbols != alphabet->size()) throw FitError("hmm model does not match alphabet");
    auto predictor = std::unique_ptr<HmmPredictor>(new HmmPredictor(alphabet, std::move(model)));
    predictor->fallback_ = std::move(fallback);
    return predictor;
}

double HmmPredictor::forward(const std::vector<std::uint32_t>& word,
                             std::vector<double>& alpha) const {
    const std::size_t n = model_.n_states;
    alpha.assign(n, 0.0);
    double log_likelihood = 0.0;
    std::vector<double> next(n);
    for (std::size_t t = 0; t < word.size(); ++t) {
        if (t == 0) {
            for (std::size_t i = 0; i < n; ++i) alpha[i] = model_.initial[i] * model_.e(i, word[0]);
        } else {
            for (std::size_t j = 0; j < n; ++j) {
                next[j] = kernels::dot(alpha.data(), transition_T_.data() + j * n, n) *
                          model_.e(j, word[t]);
            }
            alpha.swap(next);
        }
        double c = kernels::sum(alpha.data(), n);
        if (c <= 0.0) c = std::numeric_limits<double>::min();
        kernels::scale(alpha.data(), n, 1.0 / c);
        log_likelihood += std::log(c);
    }
    return log_likelihood;
}

double HmmPredictor::log_likelihood(const SequenceDatabase& db) const {
    EncodedLog log = encode(db, *alphabet_);
    std::vector<double> alpha;
    double total = 0.0;
    for (std::size_t w = 0; w < log.words.size(); ++w) {
        total += log.weights[w] * forward(log.words[w], alpha);
    }
    return total;
}

NextSymbolDistribution HmmPredictor::predict(const SymbolSequence& prefix) const {
    const std::size_t n = model_.n_states;
    std::vector<std::uint32_t> encoded;
    encoded.reserve(prefix.size());
    for (Symbol s : prefix) {
        auto idx = alphabet_->index_of(s);
        if (!idx) return NextSymbolDistribution(alphabet_, fallback_); // unknown symbol
        encoded.push_back(static_cast<std::uint32_t>(*idx));
    }

    // posterior over hidden states after the prefix; for the empty prefix the
    // initial distribution itself takes the transition step
    std::vector<double> posterior;
    if (encoded.empty()) {
        posterior = model_.initial;
    } else {
        forward(encoded, posterior);
    }

    std::vector<double> stepped(n);
    for (std::size_t j = 0; j < n; ++j) {
        stepped[j] = kernels::dot(posterior.data(), transition_T_.data() + j * n, n);
    }
    std::vector<double> probs(alphabet_->size(), 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t a = 0; a < probs.size(); ++a) probs[a] += stepped[j] * model_.e(j, a);
    }
    // guard against scaled-arithmetic drift
    double total = kernels::sum(probs.data(), probs.size());
    if (total > 0.0) kernels::scale(probs.data(), probs.size(), 1.0 / total);
    return NextSymbolDistribution(alphabet_, std::move(probs));
}

} // namespace seqpred

#include "seqpred/active_lezi.hpp"

#include <algorithm>
#include <deque>

#include "seqpred/errors.hpp"

namespace seqpred {

ActiveLeziPredictor::ActiveLeziPredictor(std::shared_ptr<const Alphabet> alphabet)
    : Predictor(std::move(alphabet)) {
    nodes_.emplace_back(); // root
}

std::uint32_t ActiveLeziPredictor::child_or_create(std::uint32_t node, std::uint32_t symbol_id) {
    auto it = nodes_[node].children.find(symbol_id);
    if (it != nodes_[node].children.end()) return it->second;
    auto fresh = static_cast<std::uint32_t>(nodes_.size());
    nodes_[node].children.emplace(symbol_id, fresh);
    nodes_.emplace_back();
    return fresh;
}

std::int64_t ActiveLeziPredictor::walk(const SymbolSequence& s) const {
    std::uint32_t node = 0;
    for (Symbol sym : s) {
        auto it = nodes_[node].children.find(sym.id());
        if (it == nodes_[node].children.end()) return -1;
        node = it->second;
    }
    return node;
}

std::unique_ptr<ActiveLeziPredictor> ActiveLeziPredictor::fit(
    const SequenceDatabase& train, std::shared_ptr<const Alphabet> alphabet) {
    auto model = std::unique_ptr<ActiveLeziPredictor>(new ActiveLeziPredictor(alphabet));
    model->fallback_ = proportional_frequencies(train, *alphabet);

    for (const auto& entry : train.entries()) {
        // multiplicities repeat the whole pass so the window statistics match
        // feeding the sequence that many times
        for (std::uint64_t rep = 0; rep < entry.count; ++rep) {
            std::uint32_t phrase_node = 0; // LZ78 phrase in progress
            std::size_t phrase_len = 0;
            std::deque<std::uint32_t> window;
            for (Symbol s : entry.word) {
                const std::uint32_t symbol_id = s.id();
                // LZ78 step: extend the phrase; a fresh extension closes it
                std::uint32_t extended = model->child_or_create(phrase_node, symbol_id);
                ++phrase_len;
                if (model->nodes_[extended].in_dictionary) {
                    phrase_node = extended;
                } else {
                    model->nodes_[extended].in_dictionary = true;
                    model->dictionary_size_ += 1;
                    model->max_phrase_ = std::max(model->max_phrase_, phrase_len);
                    phrase_node = 0;
                    phrase_len = 0;
                }
                // slide the window and count each of its suffixes
                window.push_back(symbol_id);
                while (window.size() > model->max_phrase_) window.pop_front();
                for (std::size_t start = 0; start < window.size(); ++start) {
                    std::uint32_t node = 0;
                    for (std::size_t i = start; i < window.size(); ++i) {
                        node = model->child_or_create(node, window[i]);
                    }
                    model->nodes_[node].count += 1;
                }
            }
            // the trailing unfinished phrase is discarded at the boundary
        }
    }
    return model;
}

ActiveLeziPredictor::Snapshot ActiveLeziPredictor::snapshot() const {
    Snapshot snap;
    snap.max_phrase = max_phrase_;
    snap.fallback = fallback_;
    // depth-first, children in name order, so the dump is deterministic
    struct Frame {
        std::uint32_t node;
        std::vector<std::string> path;
    };
    std::vector<Frame> stack{{0, {}}};
    while (!stack.empty()) {
        Frame frame = std::move(stack.back());
        stack.pop_back();
        const TrieNode& node = nodes_[frame.node];
        if (!frame.path.empty() && (node.count > 0 || node.in_dictionary)) {
            snap.rows.emplace_back(frame.path, node.count, node.in_dictionary);
        }
        std::vector<std::pair<std::string, std::uint32_t>> kids;
        for (const auto& [symbol_id, child] : node.children) {
            kids.emplace_back(Symbol::name_of(symbol_id), child);
        }
        std::sort(kids.begin(), kids.end(), std::greater<>()); // reversed: stack pops in order
        for (auto& [name, child] : kids) {
            Frame next{child, frame.path};
            next.path.push_back(name);
            stack.push_back(std::move(next));
        }
    }
    return snap;
}

std::unique_ptr<ActiveLeziPredictor> ActiveLeziPredictor::from_parts(
    std::shared_ptr<const Alphabet> alphabet, const Snapshot& snapshot) {
    auto model = std::unique_ptr<ActiveLeziPredictor>(new ActiveLeziPredictor(std::move(alphabet)));
    model->max_phrase_ = snapshot.max_phrase;
    model->fallback_ = snapshot.fallback;
    for (const auto& [path, count, in_dictionary] : snapshot.rows) {
        std::uint32_t node = 0;
        for (const std::string& name : path) {
            node = model->child_or_create(node, Symbol::intern(name).id());
        }
        model->nodes_[node].count = count;
        model->nodes_[node].in_dictionary = in_dictionary;
        if (in_dictionary) model->dictionary_size_ += 1;
    }
    return model;
}

bool ActiveLeziPredictor::dictionary_contains(const SymbolSequence& phrase) const {
    std::int64_t node = walk(phrase);
    return node >= 0 && nodes_[static_cast<std::size_t>(node)].in_dictionary;
}

std::uint64_t ActiveLeziPredictor::substring_count(const SymbolSequence& s) const {
    std::int64_t node = walk(s);
    return node < 0 ? 0 : nodes_[static_cast<std::size_t>(node)].count;
}

NextSymbolDistribution ActiveLeziPredictor::predict(const SymbolSequence& prefix) const {
    if (nodes_.size() <= 1) return NextSymbolDistribution(alphabet_, fallback_);

    const std::size_t max_context = max_phrase_ > 0 ? max_phrase_ - 1 : 0;
    const std::size_t context_len = std::min(max_context, prefix.size());

    std::vector<double> probs(alphabet_->size(), 0.0);
    double remaining = 1.0;

    for (std::size_t len = context_len + 1; len-- > 0;) {
        std::int64_t node_id = walk(prefix.tail(len));
        if (node_id < 0) continue;
        const TrieNode& node = nodes_[static_cast<std::size_t>(node_id)];
        double total = 0.0;
        std::size_t distinct = 0;
        for (const auto& [symbol_id, child] : node.children) {
            if (nodes_[child].count == 0) continue;
            total += static_cast<double>(nodes_[child].count);
            ++distinct;
        }
        if (total <= 0.0) continue;
        double mu = total / (total + static_cast<double>(distinct));
        double weight = remaining * mu;
        for (const auto& [symbol_id, child] : node.children) {
            if (nodes_[child].count == 0) continue;
            auto idx = alphabet_->index_of(Symbol::intern(Symbol::name_of(symbol_id)));
            if (!idx) continue; // outside the fixed alphabet
            probs[*idx] += weight * static_cast<double>(nodes_[child].count) / total;
        }
        remaining *= (1.0 - mu);
    }

    // residual escape mass: uniform over the alphabet
    double uniform = remaining / static_cast<double>(alphabet_->size());
    for (double& p : probs) p += uniform;
    return NextSymbolDistribution(alphabet_, std::move(probs));
}

} // namespace seqpred

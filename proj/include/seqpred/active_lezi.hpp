#pragma once

#include <string>
#include <tuple>
#include <unordered_map>

#include "seqpred/predictor.hpp"

namespace seqpred {

/// LZ78-style compression turned predictor. Fitting parses each training
/// sequence with LZ78 (the dictionary and the current phrase reset per
/// sequence boundary) while sliding a window of length equal to the longest
/// phrase seen so far; every suffix of the window feeds a frequency trie, so
/// trie counts approximate substring frequencies up to that length.
///
/// Prediction blends the per-order trie distributions from the longest
/// matching context down to order 0: order j contributes its plain empirical
/// child distribution, weighted by the escape chain
///     w_j = mu_j * prod_{i>j} (1 - mu_i),   mu_i = t_i / (t_i + d_i),
/// where t_i is the context's child-count total and d_i its distinct-child
/// count (PPM-style escaping: contexts explaining more mass escape less).
/// Leftover mass goes to the uniform distribution; an empty trie falls back
/// to the proportional baseline. docs/prediction_blending.md walks through a
/// full example.
class ActiveLeziPredictor : public Predictor {
public:
    static std::unique_ptr<ActiveLeziPredictor> fit(const SequenceDatabase& train,
                                                    std::shared_ptr<const Alphabet> alphabet);

    std::string method() const override { return "active-lezi"; }

    NextSymbolDistribution predict(const SymbolSequence& prefix) const override;

    /// Longest LZ78 phrase observed; the sliding-window length.
    std::size_t window_length() const { return max_phrase_; }

    std::size_t dictionary_size() const { return dictionary_size_; }
    bool dictionary_contains(const SymbolSequence& phrase) const;

    /// Occurrences of `s` recorded by the window updates (0 when absent).
    std::uint64_t substring_count(const SymbolSequence& s) const;

    /// Flattened trie for persistence: rows of (path, count, in_dictionary),
    /// where paths name symbols. Round-trips through from_parts.
    struct Snapshot {
        std::size_t max_phrase = 0;
        std::vector<std::tuple<std::vector<std::string>, std::uint64_t, bool>> rows;
        std::vector<double> fallback;
    };
    Snapshot snapshot() const;
    static std::unique_ptr<ActiveLeziPredictor> from_parts(std::shared_ptr<const Alphabet> alphabet,
                                                           const Snapshot& snapshot);

private:
    explicit ActiveLeziPredictor(std::shared_ptr<const Alphabet> alphabet);

    struct TrieNode {
        std::uint64_t count = 0;
        bool in_dictionary = false;
        std::unordered_map<std::uint32_t, std::uint32_t> children; // symbol id -> node
    };

    std::uint32_t child_or_create(std::uint32_t node, std::uint32_t symbol_id);
    std::int64_t walk(const SymbolSequence& s) const; // -1 when absent

    std::vector<TrieNode> nodes_; // [0] is the root
    std::size_t max_phrase_ = 0;
    std::size_t dictionary_size_ = 0;
    std::vector<double> fallback_;
};

} // namespace seqpred

#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

#include "seqpred/symbol.hpp"

namespace seqpred {

class SymbolMultiset;

/// Clamped mode truncates over-long tail requests to the whole sequence;
/// strict mode rejects them.
enum class TailMode { clamped, strict };

/// An ordered, immutable-after-construction list of symbols (a word, a trace,
/// or a prefix thereof).
class SymbolSequence {
public:
    SymbolSequence() = default;
    explicit SymbolSequence(std::vector<Symbol> elements) : elements_(std::move(elements)) {}
    SymbolSequence(std::initializer_list<Symbol> elements) : elements_(elements) {}

    /// Builds ⟨s1,...,sn⟩ from whitespace-free names; test/demo convenience.
    static SymbolSequence of_names(std::initializer_list<const char*> names);

    std::size_t size() const { return elements_.size(); }
    bool empty() const { return elements_.empty(); }
    Symbol at(std::size_t i) const { return elements_.at(i); } // 0-based
    auto begin() const { return elements_.begin(); }
    auto end() const { return elements_.end(); }
    const std::vector<Symbol>& elements() const { return elements_; }

    /// Prefix of length k. Requires 0 <= k <= size().
    SymbolSequence head(std::size_t k) const;

    /// Suffix of length k. In clamped mode returns the last min(k, size())
    /// elements; strict mode requires k <= size().
    SymbolSequence tail(std::size_t k, TailMode mode = TailMode::clamped) const;

    SymbolSequence concat(const SymbolSequence& other) const;

    /// Distinct symbols, name-sorted.
    std::vector<Symbol> symbol_set() const;

    /// Parikh representation: occurrence count per symbol.
    SymbolMultiset parikh() const;

    bool operator==(const SymbolSequence& other) const { return elements_ == other.elements_; }

    std::string to_string() const; // "<a,b,c>", for diagnostics

    struct Hash {
        std::size_t operator()(const SymbolSequence& s) const noexcept;
    };

private:
    std::vector<Symbol> elements_;
};

/// A bag of symbols; zero-count entries are never stored.
class SymbolMultiset {
public:
    SymbolMultiset() = default;

    void add(Symbol s, std::uint64_t count = 1);
    std::uint64_t count(Symbol s) const;
    std::uint64_t total() const { return total_; }
    std::size_t distinct() const { return entries_.size(); }

    /// Entries sorted by symbol id (stable within a process run).
    const std::vector<std::pair<Symbol, std::uint64_t>>& entries() const { return entries_; }

    /// Distinct symbols, name-sorted.
    std::vector<Symbol> support() const;

    bool operator==(const SymbolMultiset& other) const { return entries_ == other.entries_; }

    struct Hash {
        std::size_t operator()(const SymbolMultiset& m) const noexcept;
    };

private:
    std::vector<std::pair<Symbol, std::uint64_t>> entries_; // id-sorted
    std::uint64_t total_ = 0;
};

} // namespace seqpred

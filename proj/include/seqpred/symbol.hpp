#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace seqpred {

/// An interned event/activity label. Two symbols are equal iff their names
/// are equal. The name "tau" is reserved for unobservable Petri net
/// transitions and never occurs in an alphabet.
class Symbol {
public:
    static constexpr std::string_view reserved_tau = "tau";

    /// Returns the unique Symbol for `name`, creating it on first use.
    static Symbol intern(std::string_view name);

    /// Reverse lookup for an already-interned id.
    static const std::string& name_of(std::uint32_t id);

    const std::string& name() const { return name_of(id_); }
    std::uint32_t id() const { return id_; }

    friend bool operator==(Symbol a, Symbol b) { return a.id_ == b.id_; }
    friend bool operator!=(Symbol a, Symbol b) { return a.id_ != b.id_; }

    /// Name-based order; interning order is an artifact of input reading and
    /// must not leak into any output, so this is the only comparator offered.
    struct NameLess {
        bool operator()(Symbol a, Symbol b) const { return a.name() < b.name(); }
    };

private:
    explicit Symbol(std::uint32_t id) : id_(id) {}
    std::uint32_t id_;
};

/// A fixed, name-ordered symbol universe with dense indices. Predictors emit
/// probability vectors aligned with an Alphabet.
class Alphabet {
public:
    Alphabet() = default;
    /// Sorts by name and drops duplicates.
    explicit Alphabet(std::vector<Symbol> symbols);

    std::size_t size() const { return symbols_.size(); }
    bool empty() const { return symbols_.empty(); }
    Symbol at(std::size_t index) const { return symbols_.at(index); }
    std::optional<std::size_t> index_of(Symbol s) const;
    bool contains(Symbol s) const { return index_of(s).has_value(); }

    auto begin() const { return symbols_.begin(); }
    auto end() const { return symbols_.end(); }
    const std::vector<Symbol>& symbols() const { return symbols_; }

    bool operator==(const Alphabet& other) const { return symbols_ == other.symbols_; }

private:
    std::vector<Symbol> symbols_;
    std::unordered_map<std::uint32_t, std::size_t> index_;
};

} // namespace seqpred

template <>
struct std::hash<seqpred::Symbol> {
    std::size_t operator()(seqpred::Symbol s) const noexcept {
        return std::hash<std::uint32_t>{}(s.id());
    }
};

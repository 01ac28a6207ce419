#include "seqpred/sequence.hpp"

#include <algorithm>

#include "seqpred/errors.hpp"

namespace seqpred {

namespace {

std::size_t hash_ids(const std::uint64_t* data, std::size_t n, std::size_t seed) {
    // FNV-1a over 64-bit words
    std::size_t h = seed ^ 0xcbf29ce484222325ull;
    for (std::size_t i = 0; i < n; ++i) {
        h ^= data[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

} // namespace

SymbolSequence SymbolSequence::of_names(std::initializer_list<const char*> names) {
    std::vector<Symbol> elems;
    elems.reserve(names.size());
    for (const char* n : names) elems.push_back(Symbol::intern(n));
    return SymbolSequence(std::move(elems));
}

SymbolSequence SymbolSequence::head(std::size_t k) const {
    if (k > size()) {
        throw RangeError("head: requested prefix length " + std::to_string(k) +
                         " exceeds sequence length " + std::to_string(size()));
    }
    return SymbolSequence(std::vector<Symbol>(elements_.begin(), elements_.begin() + static_cast<std::ptrdiff_t>(k)));
}

SymbolSequence SymbolSequence::tail(std::size_t k, TailMode mode) const {
    if (k > size()) {
        if (mode == TailMode::strict) {
            throw RangeError("tail: requested suffix length " + std::to_string(k) +
                             " exceeds sequence length " + std::to_string(size()));
        }
        k = size();
    }
    return SymbolSequence(std::vector<Symbol>(elements_.end() - static_cast<std::ptrdiff_t>(k), elements_.end()));
}

SymbolSequence SymbolSequence::concat(const SymbolSequence& other) const {
    std::vector<Symbol> elems = elements_;
    elems.insert(elems.end(), other.elements_.begin(), other.elements_.end());
    return SymbolSequence(std::move(elems));
}

std::vector<Symbol> SymbolSequence::symbol_set() const {
    std::vector<Symbol> out = elements_;
    std::sort(out.begin(), out.end(), Symbol::NameLess{});
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

SymbolMultiset SymbolSequence::parikh() const {
    SymbolMultiset m;
    for (Symbol s : elements_) m.add(s);
    return m;
}

std::string SymbolSequence::to_string() const {
    std::string out = "<";
    for (std::size_t i = 0; i < elements_.size(); ++i) {
        if (i > 0) out += ",";
        out += elements_[i].name();
    }
    out += ">";
    return out;
}

std::size_t SymbolSequence::Hash::operator()(const SymbolSequence& s) const noexcept {
    std::size_t h = 0x9e3779b97f4a7c15ull ^ s.size();
    for (Symbol sym : s) {
        h ^= sym.id() + 0x9e3779b9ull + (h << 6) + (h >> 2);
    }
    return h;
}

void SymbolMultiset::add(Symbol s, std::uint64_t count) {
    if (count == 0) return;
    auto it = std::lower_bound(entries_.begin(), entries_.end(), s.id(),
                               [](const auto& e, std::uint32_t id) { return e.first.id() < id; });
    if (it != entries_.end() && it->first == s) {
        it->second += count;
    } else {
        entries_.insert(it, {s, count});
    }
    total_ += count;
}

std::uint64_t SymbolMultiset::count(Symbol s) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), s.id(),
                               [](const auto& e, std::uint32_t id) { return e.first.id() < id; });
    if (it != entries_.end() && it->first == s) return it->second;
    return 0;
}

std::vector<Symbol> SymbolMultiset::support() const {
    std::vector<Symbol> out;
    out.reserve(entries_.size());
    for (const auto& [sym, n] : entries_) out.push_back(sym);
    std::sort(out.begin(), out.end(), Symbol::NameLess{});
    return out;
}

std::size_t SymbolMultiset::Hash::operator()(const SymbolMultiset& m) const noexcept {
    std::vector<std::uint64_t> words;
    words.reserve(m.entries().size() * 2);
    for (const auto& [sym, n] : m.entries()) {
        words.push_back(sym.id());
        words.push_back(n);
    }
    return hash_ids(words.data(), words.size(), m.entries().size());
}

} // namespace seqpred

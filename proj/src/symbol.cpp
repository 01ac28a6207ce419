#include "seqpred/symbol.hpp"

#include <algorithm>
#include <deque>
#include <mutex>

namespace seqpred {

namespace {

struct InternTable {
    std::mutex mutex;
    std::deque<std::string> names; // deque: stored strings never move
    std::unordered_map<std::string_view, std::uint32_t> by_name;
};

InternTable& intern_table() {
    static InternTable* table = new InternTable(); // leaked: symbols live for the process
    return *table;
}

} // namespace

Symbol Symbol::intern(std::string_view name) {
    InternTable& table = intern_table();
    std::lock_guard<std::mutex> lock(table.mutex);
    auto it = table.by_name.find(name);
    if (it != table.by_name.end()) return Symbol(it->second);
    auto id = static_cast<std::uint32_t>(table.names.size());
    table.names.emplace_back(name);
    table.by_name.emplace(std::string_view(table.names.back()), id);
    return Symbol(id);
}

const std::string& Symbol::name_of(std::uint32_t id) {
    InternTable& table = intern_table();
    std::lock_guard<std::mutex> lock(table.mutex);
    return table.names[id];
}

Alphabet::Alphabet(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {
    std::sort(symbols_.begin(), symbols_.end(), Symbol::NameLess{});
    symbols_.erase(std::unique(symbols_.begin(), symbols_.end()), symbols_.end());
    for (std::size_t i = 0; i < symbols_.size(); ++i) index_.emplace(symbols_[i].id(), i);
}

std::optional<std::size_t> Alphabet::index_of(Symbol s) const {
    auto it = index_.find(s.id());
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

} // namespace seqpred

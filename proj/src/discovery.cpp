#include "seqpred/discovery.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <set>

#include "seqpred/errors.hpp"

namespace seqpred {

std::uint64_t DirectlyFollowsGraph::edge(Symbol from, Symbol to) const {
    auto it = edge_weight.find({from, to});
    return it == edge_weight.end() ? 0 : it->second;
}

DirectlyFollowsGraph build_dfg(const SequenceDatabase& db) {
    DirectlyFollowsGraph dfg;
    std::vector<Symbol> nodes;
    for (const auto& entry : db.entries()) {
        const SymbolSequence& word = entry.word;
        if (word.empty()) continue;
        dfg.start_weight[word.at(0)] += entry.count;
        dfg.end_weight[word.at(word.size() - 1)] += entry.count;
        for (std::size_t i = 0; i + 1 < word.size(); ++i) {
            dfg.edge_weight[{word.at(i), word.at(i + 1)}] += entry.count;
        }
        for (Symbol s : word) nodes.push_back(s);
    }
    std::sort(nodes.begin(), nodes.end(), Symbol::NameLess{});
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    dfg.nodes = std::move(nodes);
    return dfg;
}

DirectlyFollowsGraph filter_dfg(const DirectlyFollowsGraph& dfg, double noise_threshold) {
    if (noise_threshold < 0.0 || noise_threshold > 1.0) {
        throw ConfigError("noise threshold must lie in [0,1]");
    }
    DirectlyFollowsGraph out;
    out.nodes = dfg.nodes;

    std::map<Symbol, std::uint64_t, Symbol::NameLess> max_outgoing;
    for (const auto& [key, w] : dfg.edge_weight) {
        max_outgoing[key.from] = std::max(max_outgoing[key.from], w);
    }
    for (const auto& [key, w] : dfg.edge_weight) {
        double cutoff = noise_threshold * static_cast<double>(max_outgoing[key.from]);
        if (static_cast<double>(w) >= cutoff) out.edge_weight[key] = w;
    }

    auto filter_map = [&](const std::map<Symbol, std::uint64_t, Symbol::NameLess>& in) {
        std::map<Symbol, std::uint64_t, Symbol::NameLess> kept;
        std::uint64_t max_w = 0;
        for (const auto& [s, w] : in) max_w = std::max(max_w, w);
        for (const auto& [s, w] : in) {
            if (static_cast<double>(w) >= noise_threshold * static_cast<double>(max_w)) kept[s] = w;
        }
        return kept;
    };
    out.start_weight = filter_map(dfg.start_weight);
    out.end_weight = filter_map(dfg.end_weight);
    return out;
}

// --- process trees ------------------------------------------------------

ProcessTree ProcessTree::make_leaf(Symbol s) {
    ProcessTree t;
    t.kind = Kind::leaf;
    t.label = s;
    return t;
}

ProcessTree ProcessTree::make_tau() {
    ProcessTree t;
    t.kind = Kind::tau;
    return t;
}

ProcessTree ProcessTree::make_operator(Kind kind, std::vector<ProcessTree> children) {
    if (kind == Kind::leaf || kind == Kind::tau) throw Error("operator node expected");
    if (children.size() < 2) throw Error("operator nodes need at least two children");
    ProcessTree t;
    t.kind = kind;
    t.children = std::move(children);
    return t;
}

bool ProcessTree::operator==(const ProcessTree& other) const {
    if (kind != other.kind) return false;
    if (kind == Kind::leaf) return label == other.label;
    return children == other.children;
}

namespace {

bool bare_name(const std::string& name) {
    static const std::set<std::string> keywords = {"seq", "xor", "par", "loop", "tau"};
    if (name.empty() || keywords.count(name)) return false;
    for (char c : name) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '+' ||
              c == '.')) {
            return false;
        }
    }
    return true;
}

std::string quote_name(const std::string& name) {
    if (bare_name(name)) return name;
    std::string out = "'";
    for (char c : name) {
        if (c == '\'' || c == '\\') out += '\\';
        out += c;
    }
    out += "'";
    return out;
}

const char* operator_word(ProcessTree::Kind kind) {
    switch (kind) {
    case ProcessTree::Kind::sequence: return "seq";
    case ProcessTree::Kind::exclusive_choice: return "xor";
    case ProcessTree::Kind::parallel: return "par";
    case ProcessTree::Kind::loop: return "loop";
    default: return "?";
    }
}

} // namespace

std::string ProcessTree::to_string() const {
    switch (kind) {
    case Kind::leaf: return quote_name(label.name());
    case Kind::tau: return "tau";
    default: break;
    }
    std::string out = operator_word(kind);
    out += "(";
    for (std::size_t i = 0; i < children.size(); ++i) {
        if (i > 0) out += ", ";
        out += children[i].to_string();
    }
    out += ")";
    return out;
}

namespace {

class TreeParser {
public:
    explicit TreeParser(const std::string& text) : text_(text) {}

    ProcessTree parse() {
        ProcessTree tree = parse_node();
        skip_space();
        if (pos_ != text_.size()) fail("trailing input after process tree");
        return tree;
    }

private:
    [[noreturn]] void fail(const std::string& message) const {
        throw ParseError("process tree: " + message + " (at offset " + std::to_string(pos_) + ")");
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    ProcessTree parse_node() {
        skip_space();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        if (text_[pos_] == '\'') return ProcessTree::make_leaf(Symbol::intern(parse_quoted()));
        std::string word = parse_word();
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == '(') {
            ProcessTree::Kind kind;
            if (word == "seq") kind = ProcessTree::Kind::sequence;
            else if (word == "xor") kind = ProcessTree::Kind::exclusive_choice;
            else if (word == "par" || word == "and") kind = ProcessTree::Kind::parallel;
            else if (word == "loop") kind = ProcessTree::Kind::loop;
            else fail("unknown operator \"" + word + "\"");
            ++pos_; // '('
            std::vector<ProcessTree> children;
            for (;;) {
                children.push_back(parse_node());
                skip_space();
                if (pos_ >= text_.size()) fail("unterminated operator node");
                if (text_[pos_] == ',') {
                    ++pos_;
                    continue;
                }
                if (text_[pos_] == ')') {
                    ++pos_;
                    break;
                }
                fail("expected ',' or ')'");
            }
            if (children.size() < 2) fail("operator nodes need at least two children");
            return ProcessTree::make_operator(kind, std::move(children));
        }
        if (word == "tau") return ProcessTree::make_tau();
        return ProcessTree::make_leaf(Symbol::intern(word));
    }

    std::string parse_word() {
        std::string word;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '+' ||
                c == '.') {
                word += c;
                ++pos_;
            } else {
                break;
            }
        }
        if (word.empty()) fail("expected a symbol or operator");
        return word;
    }

    std::string parse_quoted() {
        ++pos_; // opening quote
        std::string out;
        for (;;) {
            if (pos_ >= text_.size()) fail("unterminated quoted symbol");
            char c = text_[pos_++];
            if (c == '\'') break;
            if (c == '\\') {
                if (pos_ >= text_.size()) fail("dangling escape");
                out += text_[pos_++];
            } else {
                out += c;
            }
        }
        if (out == "tau") fail("the symbol name \"tau\" is reserved");
        return out;
    }

    const std::string& text_;
    std::size_t pos_ = 0;
};

} // namespace

ProcessTree parse_process_tree(const std::string& text) { return TreeParser(text).parse(); }

// --- inductive miner -----------------------------------------------------

namespace {

using Component = std::vector<Symbol>; // name-sorted

struct CutResult {
    ProcessTree::Kind kind;
    std::vector<Component> components; // ordered for sequence; body-first for loop
};

std::size_t node_index(const std::vector<Symbol>& nodes, Symbol s) {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i] == s) return i;
    }
    throw Error("symbol not in graph: " + s.name());
}

std::vector<Component> to_components(const std::vector<Symbol>& nodes,
                                     const std::vector<int>& labels, int group_count) {
    std::vector<Component> comps(static_cast<std::size_t>(group_count));
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        comps[static_cast<std::size_t>(labels[i])].push_back(nodes[i]);
    }
    for (auto& comp : comps) std::sort(comp.begin(), comp.end(), Symbol::NameLess{});
    std::sort(comps.begin(), comps.end(), [](const Component& a, const Component& b) {
        return Symbol::NameLess{}(a.front(), b.front());
    });
    return comps;
}

/// Undirected connected components of an adjacency matrix.
std::pair<std::vector<int>, int> connected_components(const std::vector<std::vector<bool>>& adj) {
    const std::size_t n = adj.size();
    std::vector<int> label(n, -1);
    int groups = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (label[i] != -1) continue;
        std::deque<std::size_t> queue{i};
        label[i] = groups;
        while (!queue.empty()) {
            std::size_t u = queue.front();
            queue.pop_front();
            for (std::size_t v = 0; v < n; ++v) {
                if ((adj[u][v] || adj[v][u]) && label[v] == -1) {
                    label[v] = groups;
                    queue.push_back(v);
                }
            }
        }
        ++groups;
    }
    return {label, groups};
}

std::vector<std::vector<bool>> adjacency(const DirectlyFollowsGraph& dfg) {
    const std::size_t n = dfg.nodes.size();
    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
    for (const auto& [key, w] : dfg.edge_weight) {
        if (w > 0) adj[node_index(dfg.nodes, key.from)][node_index(dfg.nodes, key.to)] = true;
    }
    return adj;
}

std::vector<std::vector<bool>> transitive_reach(const std::vector<std::vector<bool>>& adj) {
    const std::size_t n = adj.size();
    std::vector<std::vector<bool>> reach = adj;
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            if (!reach[i][k]) continue;
            for (std::size_t j = 0; j < n; ++j) {
                if (reach[k][j]) reach[i][j] = true;
            }
        }
    }
    return reach;
}

std::optional<CutResult> exclusive_choice_cut(const DirectlyFollowsGraph& dfg) {
    auto [labels, groups] = connected_components(adjacency(dfg));
    if (groups < 2) return std::nullopt;
    return CutResult{ProcessTree::Kind::exclusive_choice, to_components(dfg.nodes, labels, groups)};
}

std::optional<CutResult> sequence_cut(const DirectlyFollowsGraph& dfg) {
    const std::size_t n = dfg.nodes.size();
    auto reach = transitive_reach(adjacency(dfg));

    // strongly connected groups first
    std::vector<int> group(n, -1);
    int group_count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (group[i] != -1) continue;
        group[i] = group_count;
        for (std::size_t j = i + 1; j < n; ++j) {
            if (group[j] == -1 && reach[i][j] && reach[j][i]) group[j] = group_count;
        }
        ++group_count;
    }

    auto groups_reach = [&](int a, int b) {
        for (std::size_t i = 0; i < n; ++i) {
            if (group[i] != a) continue;
            for (std::size_t j = 0; j < n; ++j) {
                if (group[j] == b && reach[i][j]) return true;
            }
        }
        return false;
    };

    // merge pairwise-unordered groups until every pair is comparable
    bool changed = true;
    while (changed) {
        changed = false;
        for (int a = 0; a < group_count && !changed; ++a) {
            bool a_used = std::count(group.begin(), group.end(), a) > 0;
            if (!a_used) continue;
            for (int b = a + 1; b < group_count && !changed; ++b) {
                bool b_used = std::count(group.begin(), group.end(), b) > 0;
                if (!b_used) continue;
                if (!groups_reach(a, b) && !groups_reach(b, a)) {
                    for (auto& g : group) {
                        if (g == b) g = a;
                    }
                    changed = true;
                }
            }
        }
    }

    // compact group labels
    std::vector<int> order;
    for (int g : group) {
        if (std::find(order.begin(), order.end(), g) == order.end()) order.push_back(g);
    }
    if (order.size() < 2) return std::nullopt;

    std::sort(order.begin(), order.end(), [&](int a, int b) { return groups_reach(a, b); });

    std::vector<Component> comps;
    for (int g : order) {
        Component comp;
        for (std::size_t i = 0; i < n; ++i) {
            if (group[i] == g) comp.push_back(dfg.nodes[i]);
        }
        std::sort(comp.begin(), comp.end(), Symbol::NameLess{});
        comps.push_back(std::move(comp));
    }
    return CutResult{ProcessTree::Kind::sequence, std::move(comps)};
}

std::optional<CutResult> parallel_cut(const DirectlyFollowsGraph& dfg) {
    const std::size_t n = dfg.nodes.size();
    auto adj = adjacency(dfg);
    // nodes that are not mutually connected must share a component
    std::vector<std::vector<bool>> constraint(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j && !(adj[i][j] && adj[j][i])) constraint[i][j] = true;
        }
    }
    auto [labels, groups] = connected_components(constraint);
    if (groups < 2) return std::nullopt;
    // every component needs a start and an end activity
    std::vector<bool> has_start(static_cast<std::size_t>(groups), false);
    std::vector<bool> has_end(static_cast<std::size_t>(groups), false);
    for (std::size_t i = 0; i < n; ++i) {
        if (dfg.start_weight.count(dfg.nodes[i])) has_start[static_cast<std::size_t>(labels[i])] = true;
        if (dfg.end_weight.count(dfg.nodes[i])) has_end[static_cast<std::size_t>(labels[i])] = true;
    }
    for (int g = 0; g < groups; ++g) {
        if (!has_start[static_cast<std::size_t>(g)] || !has_end[static_cast<std::size_t>(g)]) {
            return std::nullopt;
        }
    }
    return CutResult{ProcessTree::Kind::parallel, to_components(dfg.nodes, labels, groups)};
}

std::optional<CutResult> loop_cut(const DirectlyFollowsGraph& dfg) {
    const std::size_t n = dfg.nodes.size();
    auto adj = adjacency(dfg);

    std::vector<bool> is_start(n, false), is_end(n, false), in_body(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        is_start[i] = dfg.start_weight.count(dfg.nodes[i]) > 0;
        is_end[i] = dfg.end_weight.count(dfg.nodes[i]) > 0;
        in_body[i] = is_start[i] || is_end[i];
    }

    // candidate redo parts: connected components among non-body nodes
    std::vector<std::size_t> outside;
    for (std::size_t i = 0; i < n; ++i) {
        if (!in_body[i]) outside.push_back(i);
    }
    if (outside.empty()) return std::nullopt;

    std::vector<std::vector<bool>> sub(outside.size(), std::vector<bool>(outside.size(), false));
    for (std::size_t a = 0; a < outside.size(); ++a) {
        for (std::size_t b = 0; b < outside.size(); ++b) {
            sub[a][b] = adj[outside[a]][outside[b]];
        }
    }
    auto [sub_labels, sub_groups] = connected_components(sub);
    std::vector<std::vector<std::size_t>> redo_parts(static_cast<std::size_t>(sub_groups));
    for (std::size_t a = 0; a < outside.size(); ++a) {
        redo_parts[static_cast<std::size_t>(sub_labels[a])].push_back(outside[a]);
    }

    // a redo part is valid when it re-enters the body only at start
    // activities, is left only from end activities, and connects to all
    // starts/ends it touches; otherwise it merges into the body
    bool changed = true;
    std::vector<bool> merged(redo_parts.size(), false);
    while (changed) {
        changed = false;
        for (std::size_t r = 0; r < redo_parts.size(); ++r) {
            if (merged[r]) continue;
            bool ok = true;
            for (std::size_t a : redo_parts[r]) {
                bool exits_to_some_start = false, misses_some_start = false;
                bool entered_by_some_end = false, missed_by_some_end = false;
                for (std::size_t b = 0; b < n && ok; ++b) {
                    if (!in_body[b]) continue;
                    if (adj[a][b]) {
                        if (!is_start[b]) ok = false; // re-entry must hit a start
                        else exits_to_some_start = true;
                    }
                    if (adj[b][a]) {
                        if (!is_end[b]) ok = false; // departure must leave an end
                        else entered_by_some_end = true;
                    }
                }
                for (std::size_t b = 0; b < n && ok; ++b) {
                    if (!in_body[b]) continue;
                    if (is_start[b] && exits_to_some_start && !adj[a][b]) misses_some_start = true;
                    if (is_end[b] && entered_by_some_end && !adj[b][a]) missed_by_some_end = true;
                }
                if (misses_some_start || missed_by_some_end) ok = false;
                if (!ok) break;
            }
            if (!ok) {
                for (std::size_t a : redo_parts[r]) in_body[a] = true;
                merged[r] = true;
                changed = true;
            }
        }
    }

    std::vector<std::vector<std::size_t>> survivors;
    for (std::size_t r = 0; r < redo_parts.size(); ++r) {
        if (!merged[r]) survivors.push_back(redo_parts[r]);
    }
    if (survivors.empty()) return std::nullopt;

    Component body;
    for (std::size_t i = 0; i < n; ++i) {
        if (in_body[i]) body.push_back(dfg.nodes[i]);
    }
    std::sort(body.begin(), body.end(), Symbol::NameLess{});

    std::vector<Component> comps{body};
    std::vector<Component> redo_comps;
    for (const auto& part : survivors) {
        Component comp;
        for (std::size_t i : part) comp.push_back(dfg.nodes[i]);
        std::sort(comp.begin(), comp.end(), Symbol::NameLess{});
        redo_comps.push_back(std::move(comp));
    }
    std::sort(redo_comps.begin(), redo_comps.end(), [](const Component& a, const Component& b) {
        return Symbol::NameLess{}(a.front(), b.front());
    });
    comps.insert(comps.end(), redo_comps.begin(), redo_comps.end());
    return CutResult{ProcessTree::Kind::loop, std::move(comps)};
}

int component_of(const std::vector<Component>& comps, Symbol s) {
    for (std::size_t c = 0; c < comps.size(); ++c) {
        if (std::binary_search(comps[c].begin(), comps[c].end(), s, Symbol::NameLess{})) {
            return static_cast<int>(c);
        }
    }
    return -1;
}

SymbolSequence project_word(const SymbolSequence& word, const Component& comp) {
    std::vector<Symbol> kept;
    for (Symbol s : word) {
        if (std::binary_search(comp.begin(), comp.end(), s, Symbol::NameLess{})) kept.push_back(s);
    }
    return SymbolSequence(std::move(kept));
}

std::vector<SequenceDatabase> split_log(const SequenceDatabase& db, const CutResult& cut) {
    std::vector<SequenceDatabase> sublogs(cut.components.size());
    switch (cut.kind) {
    case ProcessTree::Kind::exclusive_choice: {
        for (const auto& entry : db.entries()) {
            // majority component; with an exact cut the word lies in one
            std::vector<std::size_t> votes(cut.components.size(), 0);
            for (Symbol s : entry.word) {
                int c = component_of(cut.components, s);
                if (c >= 0) votes[static_cast<std::size_t>(c)] += 1;
            }
            std::size_t best = 0;
            for (std::size_t c = 1; c < votes.size(); ++c) {
                if (votes[c] > votes[best]) best = c;
            }
            sublogs[best].add(project_word(entry.word, cut.components[best]), entry.count);
        }
        break;
    }
    case ProcessTree::Kind::sequence:
    case ProcessTree::Kind::parallel: {
        for (const auto& entry : db.entries()) {
            for (std::size_t c = 0; c < cut.components.size(); ++c) {
                sublogs[c].add(project_word(entry.word, cut.components[c]), entry.count);
            }
        }
        break;
    }
    case ProcessTree::Kind::loop: {
        for (const auto& entry : db.entries()) {
            // alternate body and redo segments; leading/trailing/adjacent
            // redo segments imply empty body executions
            std::vector<std::pair<int, std::vector<Symbol>>> segments;
            for (Symbol s : entry.word) {
                int c = component_of(cut.components, s);
                if (c < 0) continue;
                if (segments.empty() || segments.back().first != c) segments.push_back({c, {}});
                segments.back().second.push_back(s);
            }
            bool expect_body = true;
            for (auto& [c, seg] : segments) {
                if (c == 0) {
                    sublogs[0].add(SymbolSequence(std::move(seg)), entry.count);
                    expect_body = false;
                } else {
                    if (expect_body) sublogs[0].add(SymbolSequence{}, entry.count);
                    sublogs[static_cast<std::size_t>(c)].add(SymbolSequence(std::move(seg)),
                                                             entry.count);
                    expect_body = true;
                }
            }
            if (expect_body) sublogs[0].add(SymbolSequence{}, entry.count);
        }
        break;
    }
    default: throw Error("split_log: not an operator cut");
    }
    return sublogs;
}

ProcessTree flower_model(const std::vector<Symbol>& symbols) {
    // loop over the choice of all symbols with a tau redo: accepts any
    // nonempty interleaving; the empty word is handled by the caller's
    // empty-trace wrapper
    ProcessTree body;
    if (symbols.size() == 1) {
        body = ProcessTree::make_leaf(symbols.front());
    } else {
        std::vector<ProcessTree> leaves;
        for (Symbol s : symbols) leaves.push_back(ProcessTree::make_leaf(s));
        body = ProcessTree::make_operator(ProcessTree::Kind::exclusive_choice, std::move(leaves));
    }
    std::vector<ProcessTree> children;
    children.push_back(std::move(body));
    children.push_back(ProcessTree::make_tau());
    return ProcessTree::make_operator(ProcessTree::Kind::loop, std::move(children));
}

ProcessTree im_recurse(const SequenceDatabase& db, double threshold) {
    if (db.empty()) return ProcessTree::make_tau();

    // peel off empty traces: xor(tau, rest)
    std::uint64_t empty_count = 0;
    SequenceDatabase nonempty;
    for (const auto& entry : db.entries()) {
        if (entry.word.empty()) empty_count += entry.count;
        else nonempty.add(entry.word, entry.count);
    }
    if (empty_count > 0) {
        if (nonempty.empty()) return ProcessTree::make_tau();
        std::vector<ProcessTree> children;
        children.push_back(ProcessTree::make_tau());
        children.push_back(im_recurse(nonempty, threshold));
        return ProcessTree::make_operator(ProcessTree::Kind::exclusive_choice, std::move(children));
    }

    // base case: every trace is the same single symbol
    Alphabet alphabet = db.alphabet();
    if (alphabet.size() == 1) {
        bool all_singletons = true;
        for (const auto& entry : db.entries()) {
            if (entry.word.size() != 1) {
                all_singletons = false;
                break;
            }
        }
        if (all_singletons) return ProcessTree::make_leaf(alphabet.at(0));
    }

    DirectlyFollowsGraph dfg = filter_dfg(build_dfg(db), threshold);

    std::optional<CutResult> cut = exclusive_choice_cut(dfg);
    if (!cut) cut = sequence_cut(dfg);
    if (!cut) cut = parallel_cut(dfg);
    if (!cut) cut = loop_cut(dfg);

    if (!cut) return flower_model(alphabet.symbols());

    std::vector<SequenceDatabase> sublogs = split_log(db, *cut);
    std::vector<ProcessTree> children;
    children.reserve(sublogs.size());
    for (const auto& sublog : sublogs) children.push_back(im_recurse(sublog, threshold));
    return ProcessTree::make_operator(cut->kind, std::move(children));
}

} // namespace

ProcessTree inductive_miner(const SequenceDatabase& db, double noise_threshold) {
    if (db.empty()) throw FitError("inductive miner needs a nonempty database");
    if (noise_threshold < 0.0 || noise_threshold > 1.0) {
        throw ConfigError("noise threshold must lie in [0,1]");
    }
    return im_recurse(db, noise_threshold);
}

// --- process tree to accepting Petri net ---------------------------------

namespace {

class NetBuilder {
public:
    PlaceIndex new_place() { return net.add_place("p" + std::to_string(place_count_++)); }

    TransitionIndex new_transition(std::optional<Symbol> label) {
        return net.add_transition("t" + std::to_string(transition_count_++), label);
    }

    void arc_pt(PlaceIndex p, TransitionIndex t) {
        net.add_input_arc(net.place(p).id, net.transition(t).id);
    }

    void arc_tp(TransitionIndex t, PlaceIndex p) {
        net.add_output_arc(net.transition(t).id, net.place(p).id);
    }

    void build(const ProcessTree& node, PlaceIndex entry, PlaceIndex exit) {
        switch (node.kind) {
        case ProcessTree::Kind::leaf:
        case ProcessTree::Kind::tau: {
            TransitionIndex t = new_transition(
                node.kind == ProcessTree::Kind::leaf ? std::optional<Symbol>(node.label)
                                                     : std::nullopt);
            arc_pt(entry, t);
            arc_tp(t, exit);
            break;
        }
        case ProcessTree::Kind::sequence: {
            PlaceIndex from = entry;
            for (std::size_t i = 0; i < node.children.size(); ++i) {
                PlaceIndex to = (i + 1 == node.children.size()) ? exit : new_place();
                build(node.children[i], from, to);
                from = to;
            }
            break;
        }
        case ProcessTree::Kind::exclusive_choice: {
            for (const ProcessTree& child : node.children) build(child, entry, exit);
            break;
        }
        case ProcessTree::Kind::parallel: {
            TransitionIndex split = new_transition(std::nullopt);
            TransitionIndex join = new_transition(std::nullopt);
            arc_pt(entry, split);
            arc_tp(join, exit);
            for (const ProcessTree& child : node.children) {
                PlaceIndex in = new_place();
                PlaceIndex out = new_place();
                arc_tp(split, in);
                build(child, in, out);
                arc_pt(out, join);
            }
            break;
        }
        case ProcessTree::Kind::loop: {
            TransitionIndex enter = new_transition(std::nullopt);
            TransitionIndex leave = new_transition(std::nullopt);
            PlaceIndex body_in = new_place();
            PlaceIndex body_out = new_place();
            arc_pt(entry, enter);
            arc_tp(enter, body_in);
            arc_pt(body_out, leave);
            arc_tp(leave, exit);
            build(node.children.front(), body_in, body_out);
            for (std::size_t i = 1; i < node.children.size(); ++i) {
                build(node.children[i], body_out, body_in);
            }
            break;
        }
        }
    }

    LabeledPetriNet net;

private:
    int place_count_ = 0;
    int transition_count_ = 0;
};

} // namespace

AcceptingPetriNet tree_to_net(const ProcessTree& tree) {
    NetBuilder builder;
    PlaceIndex source = builder.new_place();
    PlaceIndex sink = builder.new_place();
    builder.build(tree, source, sink);
    AcceptingPetriNet apn;
    apn.net = std::move(builder.net);
    apn.initial_marking = Marking(apn.net.place_count());
    apn.initial_marking.set(source, 1);
    apn.final_marking = Marking(apn.net.place_count());
    apn.final_marking.set(sink, 1);
    return apn;
}

} // namespace seqpred

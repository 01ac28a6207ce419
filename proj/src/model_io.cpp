#include "seqpred/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "seqpred/active_lezi.hpp"
#include "seqpred/automaton_predictor.hpp"
#include "seqpred/errors.hpp"
#include "seqpred/hmm.hpp"
#include "seqpred/markov.hpp"
#include "seqpred/petri_predictor.hpp"
#include "seqpred/pnml.hpp"

namespace seqpred {

namespace {

using nlohmann::json;

constexpr int kFormatVersion = 1;

json alphabet_to_json(const Alphabet& alphabet) {
    json names = json::array();
    for (Symbol s : alphabet) names.push_back(s.name());
    return names;
}

std::shared_ptr<const Alphabet> alphabet_from_json(const json& names) {
    std::vector<Symbol> symbols;
    for (const auto& name : names) symbols.push_back(Symbol::intern(name.get<std::string>()));
    return std::make_shared<Alphabet>(std::move(symbols));
}

json sequence_to_json(const SymbolSequence& s) {
    json out = json::array();
    for (Symbol sym : s) out.push_back(sym.name());
    return out;
}

SymbolSequence sequence_from_json(const json& names) {
    std::vector<Symbol> symbols;
    for (const auto& name : names) symbols.push_back(Symbol::intern(name.get<std::string>()));
    return SymbolSequence(std::move(symbols));
}

json markov_payload(const MarkovPredictor& model) {
    json states = json::array();
    for (const auto& [state, counts] : model.export_states()) {
        json row;
        row["state"] = sequence_to_json(state);
        json successor = json::array();
        for (const auto& [idx, n] : counts) {
            successor.push_back(json::array({model.alphabet().at(idx).name(), n}));
        }
        row["counts"] = successor;
        states.push_back(std::move(row));
    }
    return json{{"k", model.order()}, {"states", std::move(states)}, {"fallback", model.fallback()}};
}

std::unique_ptr<MarkovPredictor> markov_from_payload(const json& payload,
                                                     std::shared_ptr<const Alphabet> alphabet) {
    std::vector<MarkovPredictor::ExportedState> states;
    for (const auto& row : payload.at("states")) {
        MarkovPredictor::ExportedState state;
        state.first = sequence_from_json(row.at("state"));
        for (const auto& entry : row.at("counts")) {
            Symbol s = Symbol::intern(entry.at(0).get<std::string>());
            auto idx = alphabet->index_of(s);
            if (!idx) throw FormatError("model file: state successor outside alphabet");
            state.second.emplace_back(static_cast<std::uint32_t>(*idx),
                                      entry.at(1).get<std::uint64_t>());
        }
        states.push_back(std::move(state));
    }
    return MarkovPredictor::from_parts(alphabet, payload.at("k").get<std::size_t>(),
                                       std::move(states),
                                       payload.at("fallback").get<std::vector<double>>());
}

json abstraction_state_to_json(const AbstractionState& state) {
    json out = json::array();
    switch (state.kind) {
    case AbstractionKind::sequence:
    case AbstractionKind::set:
        for (std::uint64_t id : state.encoding) {
            out.push_back(Symbol::name_of(static_cast<std::uint32_t>(id)));
        }
        break;
    case AbstractionKind::multiset:
        for (std::size_t i = 0; i + 1 < state.encoding.size(); i += 2) {
            out.push_back(json::array(
                {Symbol::name_of(static_cast<std::uint32_t>(state.encoding[i])), state.encoding[i + 1]}));
        }
        break;
    }
    return out;
}

AbstractionState abstraction_state_from_json(const json& payload, AbstractionKind kind) {
    // rebuild through the canonical constructor to keep encodings normalized
    std::vector<Symbol> elems;
    switch (kind) {
    case AbstractionKind::sequence:
    case AbstractionKind::set:
        for (const auto& name : payload) elems.push_back(Symbol::intern(name.get<std::string>()));
        break;
    case AbstractionKind::multiset:
        for (const auto& entry : payload) {
            Symbol s = Symbol::intern(entry.at(0).get<std::string>());
            for (std::uint64_t i = 0, n = entry.at(1).get<std::uint64_t>(); i < n; ++i) {
                elems.push_back(s);
            }
        }
        break;
    }
    SymbolSequence window{elems};
    return AbstractionState::of(window, kind, std::max<std::size_t>(window.size(), 1));
}

json petri_config_to_json(const PetriPredictorConfig& config) {
    return json{{"mode", config.mode == PetriPredictorConfig::Mode::uniform ? "uniform" : "empirical"},
                {"monte_carlo_iterations", config.monte_carlo_iterations},
                {"seed", config.seed},
                {"smoothing_alpha", config.smoothing_alpha},
                {"tau_chain_depth_limit", config.tau_chain_depth_limit},
                {"exact_closure_limit", config.exact_closure_limit}};
}

PetriPredictorConfig petri_config_from_json(const json& payload) {
    PetriPredictorConfig config;
    config.mode = payload.at("mode").get<std::string>() == "uniform"
                      ? PetriPredictorConfig::Mode::uniform
                      : PetriPredictorConfig::Mode::empirical;
    config.monte_carlo_iterations = payload.at("monte_carlo_iterations").get<std::uint64_t>();
    config.seed = payload.at("seed").get<std::uint64_t>();
    config.smoothing_alpha = payload.at("smoothing_alpha").get<double>();
    config.tau_chain_depth_limit = payload.at("tau_chain_depth_limit").get<std::uint32_t>();
    config.exact_closure_limit = payload.at("exact_closure_limit").get<std::size_t>();
    return config;
}

} // namespace

std::string model_to_json(const Predictor& predictor) {
    json doc;
    doc["format"] = "seqpredict-model";
    doc["version"] = kFormatVersion;
    doc["method"] = predictor.method();
    doc["alphabet"] = alphabet_to_json(predictor.alphabet());

    if (const auto* p = dynamic_cast<const ProportionalPredictor*>(&predictor)) {
        doc["payload"] = json{{"frequencies", p->frequencies()}};
    } else if (dynamic_cast<const RandomPredictor*>(&predictor) != nullptr) {
        doc["payload"] = json::object();
    } else if (const auto* p = dynamic_cast<const AkomPredictor*>(&predictor)) {
        json orders = json::array();
        for (std::size_t k = 1; k <= p->k_max(); ++k) {
            orders.push_back(markov_payload(p->order_model(k)));
        }
        doc["payload"] = json{{"k_max", p->k_max()},
                              {"orders", std::move(orders)},
                              {"fallback", p->order_model(1).fallback()}};
    } else if (const auto* p = dynamic_cast<const MarkovPredictor*>(&predictor)) {
        doc["payload"] = markov_payload(*p);
    } else if (const auto* p = dynamic_cast<const AutomatonPredictor*>(&predictor)) {
        const ProbabilisticAutomaton& automaton = p->automaton();
        json states = json::array();
        json accepting = json::array();
        json transitions = json::array();
        for (std::uint32_t q = 0; q < automaton.state_count(); ++q) {
            states.push_back(abstraction_state_to_json(automaton.state(q)));
            if (automaton.is_accepting(q)) accepting.push_back(q);
            for (const auto& edge : automaton.outgoing(q)) {
                transitions.push_back(json::array(
                    {q, p->alphabet().at(edge.symbol_index).name(), edge.target, edge.count}));
            }
        }
        doc["payload"] = json{{"kind", abstraction_kind_name(p->kind())},
                              {"k", p->window()},
                              {"states", std::move(states)},
                              {"accepting", std::move(accepting)},
                              {"transitions", std::move(transitions)},
                              {"fallback", p->fallback()}};
    } else if (const auto* p = dynamic_cast<const HmmPredictor*>(&predictor)) {
        const HmmModel& model = p->model();
        doc["payload"] = json{{"n_states", model.n_states},   {"initial", model.initial},
                              {"transition", model.transition}, {"emission", model.emission},
                              {"fallback", p->fallback()}};
    } else if (const auto* p = dynamic_cast<const ActiveLeziPredictor*>(&predictor)) {
        ActiveLeziPredictor::Snapshot snap = p->snapshot();
        json rows = json::array();
        for (const auto& [path, count, in_dictionary] : snap.rows) {
            rows.push_back(json::array({path, count, in_dictionary}));
        }
        doc["payload"] = json{{"max_phrase", snap.max_phrase},
                              {"rows", std::move(rows)},
                              {"fallback", snap.fallback}};
    } else if (const auto* p = dynamic_cast<const PetriPredictor*>(&predictor)) {
        json table = json::array();
        for (const auto& [marking, counts] : p->table()) {
            json marking_json = json::object();
            for (const auto& [place, n] : marking.nonzero()) {
                marking_json[p->net().net.place(place).id] = n;
            }
            json counts_json = json::object();
            for (const auto& [t, n] : counts) {
                counts_json[p->net().net.transition(t).id] = n;
            }
            table.push_back(json{{"marking", std::move(marking_json)},
                                 {"counts", std::move(counts_json)}});
        }
        doc["payload"] = json{{"config", petri_config_to_json(p->config())},
                              {"pnml", pnml_to_string(p->net())},
                              {"table", std::move(table)},
                              {"skipped_words", p->table().skipped_words}};
    } else {
        throw FormatError("model_to_json: unknown predictor type " + predictor.method());
    }
    return doc.dump(2);
}

std::unique_ptr<Predictor> model_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw FormatError(std::string("model file: invalid JSON: ") + e.what());
    }
    try {
        if (doc.at("format").get<std::string>() != "seqpredict-model") {
            throw FormatError("model file: unexpected format tag");
        }
        if (doc.at("version").get<int>() != kFormatVersion) {
            throw FormatError("model file: unsupported version");
        }
        const std::string method = doc.at("method").get<std::string>();
        auto alphabet = alphabet_from_json(doc.at("alphabet"));
        const json& payload = doc.at("payload");

        if (method == "random") {
            return RandomPredictor::fit(alphabet);
        }
        if (method == "proportional") {
            return ProportionalPredictor::from_frequencies(
                alphabet, payload.at("frequencies").get<std::vector<double>>());
        }
        if (method == "markov") {
            return markov_from_payload(payload, alphabet);
        }
        if (method == "akom") {
            std::vector<std::unique_ptr<MarkovPredictor>> models;
            for (const auto& order_payload : payload.at("orders")) {
                models.push_back(markov_from_payload(order_payload, alphabet));
            }
            return AkomPredictor::from_parts(alphabet, payload.at("k_max").get<std::size_t>(),
                                             std::move(models),
                                             payload.at("fallback").get<std::vector<double>>());
        }
        if (method == "automaton") {
            AbstractionKind kind = abstraction_kind_from_name(payload.at("kind").get<std::string>());
            std::size_t k = payload.at("k").get<std::size_t>();
            auto automaton = std::make_unique<ProbabilisticAutomaton>(kind, k, alphabet);
            const json& states = payload.at("states");
            std::vector<ProbabilisticAutomaton::StateId> ids;
            ids.reserve(states.size());
            for (const auto& state_json : states) {
                ids.push_back(automaton->intern_state(abstraction_state_from_json(state_json, kind)));
            }
            for (const auto& edge : payload.at("transitions")) {
                auto from = edge.at(0).get<std::size_t>();
                Symbol symbol = Symbol::intern(edge.at(1).get<std::string>());
                auto to = edge.at(2).get<std::size_t>();
                auto idx = alphabet->index_of(symbol);
                if (!idx || from >= ids.size() || to >= ids.size()) {
                    throw FormatError("model file: malformed automaton transition");
                }
                automaton->record(ids[from], static_cast<std::uint32_t>(*idx), ids[to],
                                  edge.at(3).get<std::uint64_t>());
            }
            for (const auto& accepting : payload.at("accepting")) {
                automaton->mark_accepting(ids.at(accepting.get<std::size_t>()));
            }
            return AutomatonPredictor::from_parts(alphabet, kind, k, std::move(automaton),
                                                  payload.at("fallback").get<std::vector<double>>());
        }
        if (method == "hmm") {
            HmmModel model;
            model.n_states = payload.at("n_states").get<std::size_t>();
            model.n_symbols = alphabet->size();
            model.initial = payload.at("initial").get<std::vector<double>>();
            model.transition = payload.at("transition").get<std::vector<double>>();
            model.emission = payload.at("emission").get<std::vector<double>>();
            return HmmPredictor::from_model(std::move(model), alphabet,
                                            payload.at("fallback").get<std::vector<double>>());
        }
        if (method == "active-lezi") {
            ActiveLeziPredictor::Snapshot snap;
            snap.max_phrase = payload.at("max_phrase").get<std::size_t>();
            snap.fallback = payload.at("fallback").get<std::vector<double>>();
            for (const auto& row : payload.at("rows")) {
                snap.rows.emplace_back(row.at(0).get<std::vector<std::string>>(),
                                       row.at(1).get<std::uint64_t>(), row.at(2).get<bool>());
            }
            return ActiveLeziPredictor::from_parts(alphabet, snap);
        }
        if (method == "petri-uniform" || method == "petri-empirical") {
            PetriPredictorConfig config = petri_config_from_json(payload.at("config"));
            AcceptingPetriNet apn = pnml_from_string(payload.at("pnml").get<std::string>());
            MarkingDistributionTable table;
            for (const auto& row : payload.at("table")) {
                std::vector<std::pair<std::string, std::uint32_t>> places;
                for (const auto& [place_id, count] : row.at("marking").items()) {
                    places.emplace_back(place_id, count.get<std::uint32_t>());
                }
                Marking marking = Marking::from_places(apn.net, places);
                for (const auto& [transition_id, count] : row.at("counts").items()) {
                    auto t = apn.net.find_transition(transition_id);
                    if (!t) throw FormatError("model file: table names unknown transition " + transition_id);
                    table.credit(marking, *t, count.get<std::uint64_t>());
                }
            }
            table.skipped_words = payload.value("skipped_words", std::uint64_t{0});
            return PetriPredictor::from_table(std::move(apn), alphabet, std::move(table), config);
        }
        throw FormatError("model file: unknown method " + method);
    } catch (const json::exception& e) {
        throw FormatError(std::string("model file: ") + e.what());
    }
}

void save_model(const Predictor& predictor, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot write file: " + path.string());
    out << model_to_json(predictor) << "\n";
}

std::unique_ptr<Predictor> load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open file: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return model_from_json(buffer.str());
}

} // namespace seqpred

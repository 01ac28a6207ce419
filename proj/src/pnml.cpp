#include "seqpred/pnml.hpp"

#include <fstream>
#include <sstream>

#include "seqpred/errors.hpp"
#include "xml.hpp"

namespace seqpred {

namespace {

std::string trim(const std::string& s) {
    std::size_t begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    std::size_t end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::string text_of(const xml::Element* element) {
    if (element == nullptr) return "";
    const xml::Element* text = element->first_child("text");
    return trim(text != nullptr ? text->text : element->text);
}

std::uint32_t parse_count(const std::string& raw, const std::string& where) {
    if (raw.empty()) return 0;
    try {
        long value = std::stol(raw);
        if (value < 0) throw FormatError("pnml: negative token count in " + where);
        return static_cast<std::uint32_t>(value);
    } catch (const std::exception&) {
        throw FormatError("pnml: invalid token count \"" + raw + "\" in " + where);
    }
}

bool has_invisible_flag(const xml::Element& transition) {
    for (const auto* tool : transition.children_named("toolspecific")) {
        if (tool->first_child("invisible") != nullptr) return true;
        if (trim(tool->attribute("activity")) == "$invisible$") return true;
    }
    return false;
}

void collect_final_marking(const xml::Element& container,
                           std::vector<std::pair<std::string, std::uint32_t>>& out, bool& found) {
    // accepts <finalmarking> with <place idref=..> children as well as the
    // ProM layout <finalmarkings><marking><place idref=..><text>n</text>
    for (const char* tag : {"finalmarking", "finalmarkings"}) {
        for (const auto* block : container.children_named(tag)) {
            found = true;
            std::vector<const xml::Element*> holders = block->children_named("marking");
            if (holders.empty()) holders.push_back(block);
            for (const auto* holder : holders) {
                for (const auto* place : holder->children_named("place")) {
                    std::string idref = place->attribute("idref");
                    if (idref.empty()) throw FormatError("pnml: final marking place without idref");
                    std::string raw = text_of(place);
                    std::uint32_t count = raw.empty() ? 1 : parse_count(raw, "final marking");
                    if (count > 0) out.emplace_back(idref, count);
                }
            }
        }
    }
}

} // namespace

AcceptingPetriNet pnml_from_string(const std::string& text) {
    auto root = xml::parse(text);
    if (root->name != "pnml") throw FormatError("pnml: root element must be <pnml>");
    const xml::Element* net_el = root->first_child("net");
    if (net_el == nullptr) throw FormatError("pnml: missing <net>");

    auto pages = net_el->children_named("page");
    if (pages.size() > 1) throw FormatError("pnml: subset supports a single page");
    const xml::Element* scope = pages.empty() ? net_el : pages.front();

    AcceptingPetriNet apn;
    std::vector<std::pair<std::string, std::uint32_t>> initial;

    for (const auto* place : scope->children_named("place")) {
        std::string id = place->attribute("id");
        if (id.empty()) throw FormatError("pnml: place without id");
        apn.net.add_place(id);
        std::uint32_t tokens = parse_count(text_of(place->first_child("initialMarking")),
                                           "initial marking of " + id);
        if (tokens > 0) initial.emplace_back(id, tokens);
    }

    for (const auto* transition : scope->children_named("transition")) {
        std::string id = transition->attribute("id");
        if (id.empty()) throw FormatError("pnml: transition without id");
        const xml::Element* name_el = transition->first_child("name");
        std::string label = text_of(name_el);
        bool invisible = has_invisible_flag(*transition) || (name_el != nullptr && label.empty());
        if (invisible) {
            apn.net.add_transition(id, std::nullopt);
        } else if (name_el == nullptr) {
            throw FormatError("pnml: transition " + id +
                              " has neither a name nor an invisible marker");
        } else if (label == Symbol::reserved_tau) {
            throw FormatError("pnml: transition " + id +
                              " uses the reserved label \"tau\"; mark it invisible instead");
        } else {
            apn.net.add_transition(id, Symbol::intern(label));
        }
    }

    for (const auto* arc : scope->children_named("arc")) {
        std::string source = arc->attribute("source");
        std::string target = arc->attribute("target");
        if (source.empty() || target.empty()) throw FormatError("pnml: arc without source/target");
        const xml::Element* inscription = arc->first_child("inscription");
        if (inscription != nullptr && parse_count(text_of(inscription), "arc inscription") > 1) {
            throw FormatError("pnml: arc weights above 1 are not supported");
        }
        if (apn.net.find_place(source) && apn.net.find_transition(target)) {
            apn.net.add_input_arc(source, target);
        } else if (apn.net.find_transition(source) && apn.net.find_place(target)) {
            apn.net.add_output_arc(source, target);
        } else {
            throw FormatError("pnml: arc endpoints must pair a place with a transition: " + source +
                              " -> " + target);
        }
    }

    if (initial.empty()) throw FormatError("pnml: missing initial marking");
    apn.initial_marking = Marking::from_places(apn.net, initial);

    std::vector<std::pair<std::string, std::uint32_t>> final_places;
    bool final_found = false;
    for (const auto* tool : net_el->children_named("toolspecific")) {
        collect_final_marking(*tool, final_places, final_found);
    }
    collect_final_marking(*net_el, final_places, final_found); // bare ProM layout
    if (!final_found) {
        throw FormatError("pnml: missing final-marking annotation (no heuristic inference)");
    }
    apn.final_marking = Marking::from_places(apn.net, final_places);
    return apn;
}

AcceptingPetriNet load_pnml(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open file: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        return pnml_from_string(buffer.str());
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

std::string pnml_to_string(const AcceptingPetriNet& apn) {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<pnml>\n";
    out << "  <net id=\"net0\" type=\"http://www.pnml.org/version-2009/grammar/ptnet\">\n";
    out << "    <page id=\"page0\">\n";
    for (PlaceIndex p = 0; p < apn.net.place_count(); ++p) {
        const auto& place = apn.net.place(p);
        out << "      <place id=\"" << xml::escape(place.id) << "\">\n";
        out << "        <name><text>" << xml::escape(place.id) << "</text></name>\n";
        if (apn.initial_marking.count(p) > 0) {
            out << "        <initialMarking><text>" << apn.initial_marking.count(p)
                << "</text></initialMarking>\n";
        }
        out << "      </place>\n";
    }
    for (TransitionIndex t = 0; t < apn.net.transition_count(); ++t) {
        const auto& transition = apn.net.transition(t);
        out << "      <transition id=\"" << xml::escape(transition.id) << "\">\n";
        if (transition.label) {
            out << "        <name><text>" << xml::escape(transition.label->name())
                << "</text></name>\n";
        } else {
            out << "        <name><text></text></name>\n";
            out << "        <toolspecific tool=\"seqpredict\" version=\"1.0\"><invisible/>"
                << "</toolspecific>\n";
        }
        out << "      </transition>\n";
    }
    std::size_t arc_id = 0;
    for (TransitionIndex t = 0; t < apn.net.transition_count(); ++t) {
        const auto& transition = apn.net.transition(t);
        for (PlaceIndex p : transition.preset) {
            out << "      <arc id=\"arc" << arc_id++ << "\" source=\""
                << xml::escape(apn.net.place(p).id) << "\" target=\""
                << xml::escape(transition.id) << "\"/>\n";
        }
        for (PlaceIndex p : transition.postset) {
            out << "      <arc id=\"arc" << arc_id++ << "\" source=\""
                << xml::escape(transition.id) << "\" target=\""
                << xml::escape(apn.net.place(p).id) << "\"/>\n";
        }
    }
    out << "    </page>\n";
    out << "    <toolspecific tool=\"seqpredict\" version=\"1.0\">\n";
    out << "      <finalmarking>\n";
    for (const auto& [p, n] : apn.final_marking.nonzero()) {
        out << "        <place idref=\"" << xml::escape(apn.net.place(p).id) << "\"><text>" << n
            << "</text></place>\n";
    }
    out << "      </finalmarking>\n";
    out << "    </toolspecific>\n";
    out << "  </net>\n";
    out << "</pnml>\n";
    return out.str();
}

void save_pnml(const AcceptingPetriNet& apn, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot write file: " + path.string());
    out << pnml_to_string(apn);
}

} // namespace seqpred

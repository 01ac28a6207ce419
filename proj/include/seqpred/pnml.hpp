#pragma once

#include <filesystem>
#include <string>

#include "seqpred/petrinet.hpp"

namespace seqpred {

/// PNML subset import/export. The subset is a single page, arcs of weight
/// one, a standard <initialMarking>, and a final marking carried in an
/// annotation block (either a seqpredict <toolspecific><finalmarking> block
/// or a ProM-style <finalmarkings> element). A transition is unobservable
/// when its <name> text is empty or a <toolspecific> block flags it
/// <invisible/>; a transition without either is rejected. See
/// docs/formats.md for the full description.

AcceptingPetriNet load_pnml(const std::filesystem::path& path);
void save_pnml(const AcceptingPetriNet& apn, const std::filesystem::path& path);

AcceptingPetriNet pnml_from_string(const std::string& text);
std::string pnml_to_string(const AcceptingPetriNet& apn);

} // namespace seqpred

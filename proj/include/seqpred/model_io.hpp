#pragma once

#include <filesystem>
#include <memory>

#include "seqpred/predictor.hpp"

namespace seqpred {

/// Writes a fitted predictor to a self-describing, versioned JSON model file
/// (schema in docs/formats.md) and reads it back. Every predictor round-trips
/// through this pair; petri predictors embed their net as PNML text.
void save_model(const Predictor& predictor, const std::filesystem::path& path);
std::unique_ptr<Predictor> load_model(const std::filesystem::path& path);

std::string model_to_json(const Predictor& predictor);
std::unique_ptr<Predictor> model_from_json(const std::string& text);

} // namespace seqpred

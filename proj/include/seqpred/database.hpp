#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "seqpred/sequence.hpp"

namespace seqpred {

/// A finite multiset of symbol sequences: the training/evaluation corpus.
class SequenceDatabase {
public:
    struct WordEntry {
        SymbolSequence word;
        std::uint64_t count = 0;
    };

    SequenceDatabase() = default;

    void add(SymbolSequence word, std::uint64_t count = 1);

    /// Distinct words with multiplicities, in first-insertion order.
    const std::vector<WordEntry>& entries() const { return entries_; }

    std::uint64_t sequence_count() const { return total_sequences_; }
    std::uint64_t event_count() const { return total_events_; }
    bool empty() const { return total_sequences_ == 0; }

    /// Symbols occurring in at least one sequence, name-sorted.
    Alphabet alphabet() const;

    /// Multiset equality, independent of insertion order.
    bool operator==(const SequenceDatabase& other) const;

private:
    std::vector<WordEntry> entries_;
    std::unordered_map<SymbolSequence, std::size_t, SymbolSequence::Hash, std::equal_to<SymbolSequence>> index_;
    std::uint64_t total_sequences_ = 0;
    std::uint64_t total_events_ = 0;
};

enum class LogFormat { line, csv };

struct IngestionOptions {
    /// Line format: lines starting with this prefix are skipped.
    std::string comment_prefix = "#";
};

/// Loads a sequence database from disk.
///
/// Line format (".sdb"): UTF-8, one sequence per line, symbols separated by
/// one or more ASCII spaces, '#'-prefixed comment lines, blank lines skipped.
/// CSV format: RFC 4180 quoting, required header with columns `case` and
/// `activity` plus an optional RFC 3339 `timestamp`; rows are grouped by case
/// and ordered by timestamp with file order breaking ties.
///
/// The token "tau" is reserved for unobservable transitions and is rejected.
SequenceDatabase load_database(const std::filesystem::path& path, LogFormat format,
                               const IngestionOptions& options = {});

/// Parses the line format from an in-memory buffer (used by the file loader).
SequenceDatabase parse_line_format(const std::string& text, const IngestionOptions& options = {});
SequenceDatabase parse_csv_format(const std::string& text);

struct PredictionPoint {
    SymbolSequence prefix;
    Symbol actual;
};

/// All (prefix, actual-next-symbol) pairs of the database, multiplicities
/// expanded, in deterministic order. Prefixes start at length 1 unless
/// `include_empty_prefix` also asks for the (ε, first-symbol) points.
std::vector<PredictionPoint> enumerate_prediction_points(const SequenceDatabase& db,
                                                         bool include_empty_prefix = false);

/// Streaming variant: invokes fn(word, prefix_length, actual, multiplicity)
/// once per distinct prediction point, avoiding prefix materialization.
void for_each_prediction_point(
    const SequenceDatabase& db, bool include_empty_prefix,
    const std::function<void(const SymbolSequence& word, std::size_t prefix_len, Symbol actual,
                             std::uint64_t multiplicity)>& fn);

} // namespace seqpred

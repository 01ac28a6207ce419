#pragma once

#include <stdexcept>
#include <string>

namespace seqpred {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Out-of-range argument (e.g. prefix length larger than the sequence).
class RangeError : public Error {
public:
    using Error::Error;
};

/// Malformed input file; the message carries the line number where known.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Input file contained no sequences at all.
class EmptyDatabaseError : public Error {
public:
    using Error::Error;
};

/// Structurally invalid PNML or model file.
class FormatError : public Error {
public:
    using Error::Error;
};

/// Attempt to fire a transition that is not enabled.
class FiringError : public Error {
public:
    using Error::Error;
};

/// A bounded reachability search ran out of budget with the answer still open.
/// Distinct from a definite negative answer.
class UndecidableError : public Error {
public:
    using Error::Error;
};

/// Alignment search exceeded its state or token budget.
class BudgetError : public Error {
public:
    using Error::Error;
};

/// No prefix-alignment exists: the final marking is unreachable from every
/// candidate marking within the token budget.
class InfeasibilityError : public Error {
public:
    using Error::Error;
};

/// Model fitting failed (e.g. no training events for a frequency baseline).
class FitError : public Error {
public:
    using Error::Error;
};

/// Scoring, splitting or confidence-interval computation failed.
class EvaluationError : public Error {
public:
    using Error::Error;
};

/// Invalid benchmark or grid-search configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace seqpred

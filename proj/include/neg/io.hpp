#pragma once

#include "neg/analysis.hpp"
#include "neg/model.hpp"
#include "neg/reduce.hpp"
#include "neg/semantics.hpp"
#include "neg/summary.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace neg {

struct Diagnostic {
    enum class Kind { syntax, semantic };

    Kind kind = Kind::syntax;
    std::size_t line = 1;   // 1-based
    std::size_t col = 1;
    std::string message;
};

std::string to_string(const Diagnostic& d);

struct ParseResult {
    std::optional<Negotiation> negotiation;
    std::vector<Diagnostic> diagnostics;
};

/// Parse a negotiation document. On success the result passes validate();
/// malformed input yields positioned diagnostics and no value. Nothing is
/// silently repaired.
ParseResult parse_negotiation(std::string_view text);

/// Canonical serialization: fixed key order, sorted sets, declaration-order
/// outcome and state lists, newline-terminated. Structurally equal
/// negotiations serialize to identical bytes. Throws PreconditionError on
/// an invalid negotiation.
std::string serialize(const Negotiation& n);

/// FNV-1a 64-bit hash of the canonical serialization, as 16 hex digits.
std::string fingerprint(const Negotiation& n);

struct TraceParseResult {
    std::optional<ReductionTrace> trace;
    std::vector<Diagnostic> diagnostics;
};

std::string serialize_trace(const ReductionTrace& t);
TraceParseResult parse_trace(std::string_view text);

std::string serialize_verdict(const SoundnessVerdict& v);
std::string serialize_classification(const Classification& c);
std::string serialize_summary(const Summary& s, const Negotiation& n);
std::string serialize_metrics(const Metrics& m);
std::string serialize_equivalence(const EquivalenceResult& e);

/// True iff `text` is a well-formed report document; when it is, `kind`
/// receives its top-level discriminator. Machine outputs of the CLI all
/// satisfy this.
bool well_formed_document(std::string_view text, std::string* kind = nullptr);

/// Line-oriented reachability graph export: one vertex and one edge per line.
std::string reach_to_text(const ReachabilityGraph& g, const Negotiation& n);

/// DOT rendering of the reachability graph for external visualization.
std::string reach_to_dot(const ReachabilityGraph& g, const Negotiation& n);

} // namespace neg

#pragma once

#include "neg/analysis.hpp"
#include "neg/relation.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>

namespace neg {

/// Per final outcome, the summary transformer of the negotiation, together
/// with the soundness verdict of the source. Unsound sources carry the
/// verdict only.
struct Summary {
    SoundnessVerdict verdict;
    std::map<Symbol, GlobalRelation> relations;
};

struct SummarizeOptions {
    ExploreBudget budget{};
    /// When set, intermediate vertices are eliminated in a seeded random
    /// order instead of the default min-degree order. The result must not
    /// depend on it; tests use this to check order independence.
    std::optional<std::uint64_t> elimination_order_seed{};
};

/// Summary via state elimination on the reachability graph, interpreted as
/// a weighted automaton over the relation semiring (union, composition,
/// star). Handles cyclic negotiations through the closure of self-loops.
Summary summarize_statespace(const Negotiation& n, const SummarizeOptions& opts = {});

/// Summary by explicit enumeration of all large steps (paths x_0 -> x_f),
/// composing transformers along each path. Requires an acyclic negotiation.
Summary brute_force_summary(const Negotiation& n, const ExploreBudget& budget = {});

struct EquivalenceResult {
    bool equivalent = false;
    std::string reason;
};

/// Equivalence: both unsound, or both sound with the same final
/// outcomes and equal summary transformers. Requires identical agent sets
/// and state spaces.
EquivalenceResult equivalent(const Negotiation& a, const Negotiation& b,
                             const ExploreBudget& budget = {});

} // namespace neg

#pragma once

#include "neg/model.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

namespace neg {

/// Per-agent sets of atoms the agent is ready to engage in next.
/// The map over agent names is the canonical form used for deduplication.
struct Marking {
    std::map<Symbol, std::set<Symbol>> ready;

    bool operator==(const Marking&) const = default;
    bool operator<(const Marking& other) const { return ready < other.ready; }
};

Marking initial_marking(const Negotiation& n);
Marking final_marking(const Negotiation& n);

/// Atoms enabled at `m`: every party is ready for them. Sorted by id.
std::vector<Symbol> enabled(const Marking& m, const Negotiation& n);

/// Fire (atom, outcome) at `m`. Throws PreconditionError when the atom is
/// not enabled or the outcome unknown.
Marking step(const Marking& m, const Symbol& atom, const Symbol& outcome,
             const Negotiation& n);

/// True iff `m` enables nothing and is not the final marking.
bool is_deadlock(const Marking& m, const Negotiation& n);

struct SmallStep {
    std::size_t from;
    std::size_t to;
    Symbol atom;
    Symbol outcome;

    bool operator==(const SmallStep&) const = default;
};

struct ReachabilityGraph {
    std::vector<Marking> vertices;           // BFS discovery order, x_0 first
    std::vector<SmallStep> edges;
    std::vector<std::vector<std::size_t>> out; // vertex -> indices into edges
    std::size_t initial = 0;
    std::optional<std::size_t> final;        // vertex of x_f, when reachable
};

struct ExploreBudget {
    std::size_t max_markings = 1'000'000;
};

/// Exhaustive BFS over reachable markings. Expansion is deterministic:
/// atoms in id order, outcomes in declaration order. Throws BudgetError
/// when the marking budget is exceeded.
ReachabilityGraph reach(const Negotiation& n, const ExploreBudget& budget = {});

/// Replay `seq` from the initial marking; the first step that is not
/// enabled raises StepError with its index.
Marking run(const Negotiation& n,
            const std::vector<std::pair<Symbol, Symbol>>& seq);

/// All occurrence sequences (including every prefix) up to `max_len` steps.
/// For acyclic negotiations, max_len = |atoms| enumerates the full set.
std::vector<std::vector<std::pair<Symbol, Symbol>>>
enumerate_sequences(const Negotiation& n, std::size_t max_len,
                    const ExploreBudget& budget = {});

/// True iff two reachability graphs admit exactly the same occurrence
/// sequences (paired walk over the deterministic labelled graphs).
bool same_occurrence_language(const ReachabilityGraph& a, const ReachabilityGraph& b);

} // namespace neg

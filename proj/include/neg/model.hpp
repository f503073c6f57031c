#pragma once

#include <compare>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace neg {

using Symbol = std::string;
using Tuple  = std::vector<Symbol>;

/// An agent together with its finite, non-empty, ordered state space.
/// The declaration order of states is preserved (it matters for the
/// "between" semantics of interval-style transformers and for canonical
/// serialization); agent NAMES are ordered lexicographically everywhere.
struct Agent {
    Symbol name;
    std::vector<Symbol> states;

    bool operator==(const Agent&) const = default;
};

/// A relation between local state tuples of a fixed party set.
/// Tuples are indexed by the parties in canonical (lexicographic) order,
/// so the lifted global relation fixes non-party coordinates by
/// construction. Left-totality is checked by validate(), not on build.
struct Transformer {
    std::vector<Symbol> parties;              // sorted by name
    std::set<std::pair<Tuple, Tuple>> pairs;

    bool operator==(const Transformer&) const = default;
};

struct Atom {
    Symbol id;
    std::vector<Symbol> parties;              // sorted by name
    std::vector<Symbol> outcomes;             // declaration order, unique
    std::map<Symbol, Transformer> delta;      // outcome -> transformer

    bool operator==(const Atom&) const = default;
    bool has_party(const Symbol& agent) const;
    bool has_outcome(const Symbol& outcome) const;
};

/// Key of the transition function: (atom, party, outcome).
struct TransitionKey {
    Symbol atom;
    Symbol agent;
    Symbol outcome;

    auto operator<=>(const TransitionKey&) const = default;
};

/// A multiparty negotiation: agents with state spaces, atoms, the initial
/// and final atom, and the transition function mapping every (atom, party,
/// outcome) triple to the set of atoms the party is ready for next.
struct Negotiation {
    std::vector<Agent> agents;                // sorted by name
    std::map<Symbol, Atom> atoms;
    Symbol initial;
    Symbol final;
    std::map<TransitionKey, std::set<Symbol>> transitions;

    bool operator==(const Negotiation&) const = default;

    // --- builder helpers (keep the canonical orders) ---
    void add_agent(const Symbol& name, std::vector<Symbol> states);
    Atom& add_atom(const Symbol& id, std::vector<Symbol> parties,
                   std::vector<Symbol> outcomes);
    void set_transition(const Symbol& atom, const Symbol& agent,
                        const Symbol& outcome, std::set<Symbol> targets);
    void set_delta(const Symbol& atom, const Symbol& outcome, Transformer t);

    // --- lookups ---
    const Agent* find_agent(const Symbol& name) const;
    const Atom*  find_atom(const Symbol& id) const;
    const Atom&  atom(const Symbol& id) const;       // throws on unknown id
    const std::set<Symbol>& targets(const Symbol& atom, const Symbol& agent,
                                    const Symbol& outcome) const;
    std::vector<Symbol> agent_names() const;
    const std::vector<Symbol>& states_of(const Symbol& agent) const;
};

/// Cartesian product of the given state spaces, in declaration order.
std::vector<Tuple> enumerate_product(const std::vector<std::vector<Symbol>>& spaces);

/// Identity transformer over the given parties of `n`.
Transformer identity_transformer(const Negotiation& n,
                                 const std::vector<Symbol>& parties);

/// True if `t` relates every local tuple exactly to itself.
bool is_identity(const Negotiation& n, const Transformer& t);

/// Union of two transformers over the same party set.
Transformer unite_local(const Transformer& a, const Transformer& b);

/// Relational composition (a first, then b) over the same party set.
Transformer compose_local(const Transformer& a, const Transformer& b);

/// Widen `t` to the larger party set `parties`, leaving added agents fixed.
Transformer extend_local(const Negotiation& n, const Transformer& t,
                         const std::vector<Symbol>& parties);

/// Structural validation. Returns one human-readable message per violated
/// invariant; an empty result means the negotiation is well formed.
std::vector<std::string> validate(const Negotiation& n);

} // namespace neg

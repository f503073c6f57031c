#pragma once

#include "neg/model.hpp"

#include <compare>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace neg {

struct CnfLiteral {
    unsigned var = 0;      // 1-based
    bool positive = true;

    auto operator<=>(const CnfLiteral&) const = default;
};

struct CnfClause {
    std::set<CnfLiteral> literals;

    bool operator==(const CnfClause&) const = default;
};

struct CnfFormula {
    unsigned num_vars = 0;
    std::vector<CnfClause> clauses;

    bool operator==(const CnfFormula&) const = default;
};

bool is_tautology(const CnfClause& c);

/// DIMACS CNF reader (`p cnf <vars> <clauses>` header, zero-terminated
/// clause lines, `c` comments). Throws NegotiationError with a 1-based
/// line number on malformed input.
CnfFormula parse_dimacs(const std::string& text);

/// The Father-Daughter-Mother negotiation over the given time states
/// (each agent's state space is the times plus "angry").
Negotiation gen_fdm(const std::vector<Symbol>& times);

/// gen_fdm with Mother routed only to the daughter-mother atom after the
/// start, which makes the yes/no outcomes of the first round deadlock.
Negotiation gen_fdm_unsound(const std::vector<Symbol>& times);

/// The cyclic ping-pong variant: the daughter-mother atom gains an
/// ask-father outcome and the daughter can loop back via her own atom.
Negotiation gen_pingpong(const std::vector<Symbol>& times);

/// Judge construction for a CNF formula: one single-state agent per
/// variable plus a judge; the negotiation is sound iff the formula is
/// unsatisfiable. Clauses must have 1..3 literals and no tautologies.
Negotiation gen_sat(const CnfFormula& f);

/// Random sound deterministic acyclic negotiation: atoms are layered
/// between the initial and final atom, every agent is a party of every
/// atom, and each (atom, outcome) is wired to a single later atom so that
/// every run funnels into the final atom. Reproducible from the seed.
Negotiation gen_random_sdan(std::uint64_t seed, std::size_t num_atoms,
                            std::size_t num_agents, std::size_t outcomes_per_atom,
                            std::size_t states_per_agent);

} // namespace neg

#pragma once

#include "neg/semantics.hpp"

#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

namespace neg {

/// Outcome of the soundness decision. `sound` holds exactly when no atom
/// is unreached and no reachable marking fails to reach the final marking;
/// `witness` is a shortest occurrence sequence into such a failing marking.
struct SoundnessVerdict {
    bool sound = false;
    std::set<Symbol> unreached_atoms;
    std::optional<std::vector<std::pair<Symbol, Symbol>>> witness;
};

SoundnessVerdict check_soundness(const Negotiation& n, const ExploreBudget& budget = {});

/// Directed graph over atom ids: edge (n, n') iff n' in X(n, a, r) for some
/// party a and outcome r.
std::map<Symbol, std::set<Symbol>> atom_graph(const Negotiation& n);

bool is_acyclic(const Negotiation& n);

struct Classification {
    bool acyclic = false;
    std::set<Symbol> deterministic_agents;
    bool deterministic = false;
    bool weakly_deterministic = false;
};

Classification classify(const Negotiation& n);

} // namespace neg

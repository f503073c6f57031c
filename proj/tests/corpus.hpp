#pragma once

#include "neg/model.hpp"

#include <string>
#include <vector>

namespace corpus {

struct Instance {
    std::string name;
    neg::Negotiation n;
};

/// Hand-written edge cases (fig-style rule instances, endgames, unsound
/// shapes, parser-sourced documents).
const std::vector<Instance>& hand_instances();

/// Hand instances plus generator families; every instance stays within
/// 8 atoms, 3 agents and 3 states per agent, and passes validate().
const std::vector<Instance>& full_corpus();

/// Chain of `k` single-outcome atoms ending in the final atom.
neg::Negotiation chain(std::size_t k);

/// Random structurally valid negotiation over two agents: random parties,
/// hyperarcs, and left-total transformers; may be cyclic and unsound.
neg::Negotiation random_negotiation(std::uint64_t seed);

/// Swap the {0,1}-valued coordinate of one party, fixing all others.
neg::Transformer swap_party(const neg::Negotiation& n,
                            const std::vector<neg::Symbol>& parties,
                            const neg::Symbol& which);

} // namespace corpus

#pragma once

#include "neg/model.hpp"

#include <map>
#include <memory>
#include <set>
#include <vector>

namespace neg {

/// The global state product the lifted relations live on: all agents in
/// canonical order with their state spaces.
struct Domain {
    std::vector<Symbol> agents;
    std::vector<std::vector<Symbol>> states;

    bool operator==(const Domain&) const = default;

    static Domain of(const Negotiation& n);
    std::size_t size() const;               // |Q_A|
    std::vector<Tuple> all_states() const;
};

/// A relation on the global state product, stored as a successor map.
/// Keys with empty images are never stored, so structural equality of the
/// maps is relation equality.
struct GlobalRelation {
    std::shared_ptr<const Domain> domain;
    std::map<Tuple, std::set<Tuple>> succ;

    bool operator==(const GlobalRelation& other) const;
    bool contains(const Tuple& from, const Tuple& to) const;
    std::size_t pair_count() const;
    void add(Tuple from, Tuple to);
};

GlobalRelation empty_relation(std::shared_ptr<const Domain> d);
GlobalRelation identity_relation(std::shared_ptr<const Domain> d);

/// Lift a party-local transformer to the global product: party coordinates
/// follow the stored pairs, all other coordinates stay equal.
GlobalRelation lift(const Negotiation& n, const Transformer& t,
                    std::shared_ptr<const Domain> d = nullptr);

/// { (q,q'') | exists q' with (q,q') in a and (q',q'') in b }.
GlobalRelation compose(const GlobalRelation& a, const GlobalRelation& b);

/// Set union of the pair sets.
GlobalRelation unite(const GlobalRelation& a, const GlobalRelation& b);

/// Reflexive-transitive closure.
GlobalRelation star(const GlobalRelation& a);

} // namespace neg

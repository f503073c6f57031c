#include "neg/relation.hpp"

#include "neg/errors.hpp"

#include <algorithm>
#include <deque>

namespace neg {

Domain Domain::of(const Negotiation& n) {
    Domain d;
    for (const auto& a : n.agents) {
        d.agents.push_back(a.name);
        d.states.push_back(a.states);
    }
    return d;
}

std::size_t Domain::size() const {
    std::size_t product = 1;
    for (const auto& s : states) product *= s.size();
    return product;
}

std::vector<Tuple> Domain::all_states() const {
    return enumerate_product(states);
}

bool GlobalRelation::operator==(const GlobalRelation& other) const {
    if (domain && other.domain) {
        if (!(*domain == *other.domain)) return false;
    } else if (bool(domain) != bool(other.domain)) {
        return false;
    }
    return succ == other.succ;
}

bool GlobalRelation::contains(const Tuple& from, const Tuple& to) const {
    auto it = succ.find(from);
    return it != succ.end() && it->second.count(to);
}

std::size_t GlobalRelation::pair_count() const {
    std::size_t total = 0;
    for (const auto& [from, tos] : succ) total += tos.size();
    return total;
}

void GlobalRelation::add(Tuple from, Tuple to) {
    succ[std::move(from)].insert(std::move(to));
}

GlobalRelation empty_relation(std::shared_ptr<const Domain> d) {
    return GlobalRelation{std::move(d), {}};
}

GlobalRelation identity_relation(std::shared_ptr<const Domain> d) {
    GlobalRelation r{d, {}};
    for (auto& q : d->all_states()) r.succ[q].insert(q);
    return r;
}

GlobalRelation lift(const Negotiation& n, const Transformer& t,
                    std::shared_ptr<const Domain> d) {
    if (!d) d = std::make_shared<const Domain>(Domain::of(n));
    std::vector<std::size_t> party_pos;
    std::vector<std::size_t> other_pos;
    for (std::size_t i = 0; i < d->agents.size(); ++i) {
        if (std::binary_search(t.parties.begin(), t.parties.end(), d->agents[i]))
            party_pos.push_back(i);
        else
            other_pos.push_back(i);
    }
    if (party_pos.size() != t.parties.size())
        throw PreconditionError("lift: transformer party not among the negotiation agents");

    std::vector<std::vector<Symbol>> other_spaces;
    for (auto i : other_pos) other_spaces.push_back(d->states[i]);

    GlobalRelation r{d, {}};
    for (const auto& fill : enumerate_product(other_spaces)) {
        for (const auto& [in, out] : t.pairs) {
            Tuple gin(d->agents.size()), gout(d->agents.size());
            for (std::size_t k = 0; k < party_pos.size(); ++k) {
                gin[party_pos[k]]  = in[k];
                gout[party_pos[k]] = out[k];
            }
            for (std::size_t k = 0; k < other_pos.size(); ++k) {
                gin[other_pos[k]]  = fill[k];
                gout[other_pos[k]] = fill[k];
            }
            r.succ[std::move(gin)].insert(std::move(gout));
        }
    }
    return r;
}

namespace {

void require_same_domain(const GlobalRelation& a, const GlobalRelation& b) {
    if (!a.domain || !b.domain || !(*a.domain == *b.domain))
        throw PreconditionError("relation domains differ");
}

} // namespace

GlobalRelation compose(const GlobalRelation& a, const GlobalRelation& b) {
    require_same_domain(a, b);
    GlobalRelation r{a.domain, {}};
    for (const auto& [from, mids] : a.succ) {
        std::set<Tuple> out;
        for (const auto& mid : mids) {
            auto it = b.succ.find(mid);
            if (it == b.succ.end()) continue;
            out.insert(it->second.begin(), it->second.end());
        }
        if (!out.empty()) r.succ[from] = std::move(out);
    }
    return r;
}

GlobalRelation unite(const GlobalRelation& a, const GlobalRelation& b) {
    require_same_domain(a, b);
    GlobalRelation r = a;
    for (const auto& [from, tos] : b.succ) r.succ[from].insert(tos.begin(), tos.end());
    return r;
}

GlobalRelation star(const GlobalRelation& a) {
    if (!a.domain) throw PreconditionError("star: relation without a domain");
    GlobalRelation r{a.domain, {}};
    for (auto& q : a.domain->all_states()) {
        // BFS over successors from q; the closure row is {q} plus everything reachable.
        std::set<Tuple> row{q};
        std::deque<Tuple> work{q};
        while (!work.empty()) {
            Tuple cur = std::move(work.front());
            work.pop_front();
            auto it = a.succ.find(cur);
            if (it == a.succ.end()) continue;
            for (const auto& next : it->second)
                if (row.insert(next).second) work.push_back(next);
        }
        r.succ[q] = std::move(row);
    }
    return r;
}

} // namespace neg

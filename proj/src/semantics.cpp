#include "neg/semantics.hpp"

#include "neg/errors.hpp"

#include <algorithm>
#include <deque>

namespace neg {

Marking initial_marking(const Negotiation& n) {
    Marking m;
    for (const auto& a : n.agents) m.ready[a.name] = {n.initial};
    return m;
}

Marking final_marking(const Negotiation& n) {
    Marking m;
    for (const auto& a : n.agents) m.ready[a.name] = {};
    return m;
}

namespace {

bool enables(const Marking& m, const Atom& atom) {
    for (const auto& p : atom.parties) {
        auto it = m.ready.find(p);
        if (it == m.ready.end() || !it->second.count(atom.id)) return false;
    }
    return true;
}

} // namespace

std::vector<Symbol> enabled(const Marking& m, const Negotiation& n) {
    std::vector<Symbol> result;
    for (const auto& [id, atom] : n.atoms)
        if (enables(m, atom)) result.push_back(id);
    return result;
}

Marking step(const Marking& m, const Symbol& atom_id, const Symbol& outcome,
             const Negotiation& n) {
    const Atom& a = n.atom(atom_id);
    if (!a.has_outcome(outcome))
        throw PreconditionError("atom " + atom_id + " has no outcome '" + outcome + "'");
    if (!enables(m, a))
        throw PreconditionError("atom " + atom_id + " is not enabled");
    Marking next = m;
    for (const auto& p : a.parties)
        next.ready[p] = n.targets(atom_id, p, outcome);
    return next;
}

bool is_deadlock(const Marking& m, const Negotiation& n) {
    if (m == final_marking(n)) return false;
    return enabled(m, n).empty();
}

ReachabilityGraph reach(const Negotiation& n, const ExploreBudget& budget) {
    ReachabilityGraph g;
    std::map<Marking, std::size_t> index;

    g.vertices.push_back(initial_marking(n));
    g.out.emplace_back();
    index.emplace(g.vertices[0], 0);

    std::deque<std::size_t> work{0};
    while (!work.empty()) {
        std::size_t v = work.front();
        work.pop_front();
        for (const auto& [id, atom] : n.atoms) {
            if (!enables(g.vertices[v], atom)) continue;
            for (const auto& r : atom.outcomes) {
                Marking next = step(g.vertices[v], id, r, n);
                auto [it, fresh] = index.try_emplace(std::move(next), g.vertices.size());
                if (fresh) {
                    if (g.vertices.size() >= budget.max_markings)
                        throw BudgetError("exploration budget exceeded (" +
                                          std::to_string(budget.max_markings) + " markings)");
                    g.vertices.push_back(it->first);
                    g.out.emplace_back();
                    work.push_back(it->second);
                }
                g.out[v].push_back(g.edges.size());
                g.edges.push_back(SmallStep{v, it->second, id, r});
            }
        }
    }

    auto fin = index.find(final_marking(n));
    if (fin != index.end()) g.final = fin->second;
    return g;
}

Marking run(const Negotiation& n,
            const std::vector<std::pair<Symbol, Symbol>>& seq) {
    Marking m = initial_marking(n);
    for (std::size_t i = 0; i < seq.size(); ++i) {
        try {
            m = step(m, seq[i].first, seq[i].second, n);
        } catch (const PreconditionError& e) {
            throw StepError(i, "step " + std::to_string(i) + " (" + seq[i].first + ", " +
                                   seq[i].second + "): " + e.what());
        }
    }
    return m;
}

std::vector<std::vector<std::pair<Symbol, Symbol>>>
enumerate_sequences(const Negotiation& n, std::size_t max_len,
                    const ExploreBudget& budget) {
    ReachabilityGraph g = reach(n, budget);
    std::vector<std::vector<std::pair<Symbol, Symbol>>> all;
    std::vector<std::pair<Symbol, Symbol>> current;

    // Depth-first over the graph; every path from x_0 is a sequence.
    auto dfs = [&](auto&& self, std::size_t v) -> void {
        all.push_back(current);
        if (current.size() == max_len) return;
        for (auto ei : g.out[v]) {
            const SmallStep& e = g.edges[ei];
            current.emplace_back(e.atom, e.outcome);
            self(self, e.to);
            current.pop_back();
        }
    };
    dfs(dfs, g.initial);
    std::sort(all.begin(), all.end());
    return all;
}

bool same_occurrence_language(const ReachabilityGraph& a, const ReachabilityGraph& b) {
    // Both graphs are deterministic in their (atom, outcome) labels, so a
    // synchronized walk comparing enabled label sets decides language equality.
    using Labels = std::map<std::pair<Symbol, Symbol>, std::size_t>;
    auto labels_of = [](const ReachabilityGraph& g, std::size_t v) {
        Labels out;
        for (auto ei : g.out[v])
            out[{g.edges[ei].atom, g.edges[ei].outcome}] = g.edges[ei].to;
        return out;
    };

    std::set<std::pair<std::size_t, std::size_t>> seen;
    std::deque<std::pair<std::size_t, std::size_t>> work{{a.initial, b.initial}};
    seen.insert({a.initial, b.initial});
    while (!work.empty()) {
        auto [va, vb] = work.front();
        work.pop_front();
        Labels la = labels_of(a, va);
        Labels lb = labels_of(b, vb);
        if (la.size() != lb.size()) return false;
        for (const auto& [label, ta] : la) {
            auto it = lb.find(label);
            if (it == lb.end()) return false;
            if (seen.insert({ta, it->second}).second) work.push_back({ta, it->second});
        }
    }
    return true;
}

} // namespace neg

#include "neg/summary.hpp"

#include "neg/errors.hpp"

#include <algorithm>
#include <random>

namespace neg {

namespace {

using EdgeMap = std::map<std::pair<std::size_t, std::size_t>, GlobalRelation>;

void add_edge(EdgeMap& edges, std::size_t from, std::size_t to, const GlobalRelation& rel) {
    if (rel.succ.empty()) return;
    auto it = edges.find({from, to});
    if (it == edges.end())
        edges.emplace(std::make_pair(from, to), rel);
    else
        it->second = unite(it->second, rel);
}

/// Remove vertex x, rerouting every u -> x -> w path through a composed
/// edge. A self-loop on x is folded in via its closure first.
void eliminate(EdgeMap& edges, std::size_t x) {
    std::optional<GlobalRelation> loop;
    std::vector<std::pair<std::size_t, GlobalRelation>> in, out;
    for (auto it = edges.begin(); it != edges.end();) {
        if (it->first.first == x && it->first.second == x) {
            loop = star(it->second);
            it = edges.erase(it);
        } else if (it->first.second == x) {
            in.emplace_back(it->first.first, it->second);
            it = edges.erase(it);
        } else if (it->first.first == x) {
            out.emplace_back(it->first.second, it->second);
            it = edges.erase(it);
        } else {
            ++it;
        }
    }
    for (const auto& [u, f1] : in) {
        GlobalRelation through = loop ? compose(f1, *loop) : f1;
        for (const auto& [w, f2] : out) add_edge(edges, u, w, compose(through, f2));
    }
}

std::map<std::size_t, std::size_t> degrees(const EdgeMap& edges) {
    std::map<std::size_t, std::size_t> d;
    for (const auto& [key, _] : edges) {
        ++d[key.first];
        ++d[key.second];
    }
    return d;
}

/// Path sum over the reachability graph, keeping only final-atom edges
/// labelled with `final_outcome` as accepting steps.
GlobalRelation path_sum(const Negotiation& n, const ReachabilityGraph& g,
                        const std::map<Symbol, GlobalRelation>& lifted,
                        std::shared_ptr<const Domain> domain,
                        const Symbol& final_outcome,
                        const std::optional<std::uint64_t>& order_seed) {
    const std::size_t source = g.vertices.size();
    const std::size_t sink   = g.vertices.size() + 1;

    EdgeMap edges;
    for (const auto& e : g.edges) {
        if (e.atom == n.final && e.outcome != final_outcome) continue;
        add_edge(edges, e.from, e.to, lifted.at(e.atom + "\x1f" + e.outcome));
    }
    add_edge(edges, source, g.initial, identity_relation(domain));
    if (!g.final) return empty_relation(domain);
    add_edge(edges, *g.final, sink, identity_relation(domain));

    if (order_seed) {
        std::vector<std::size_t> order(g.vertices.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::mt19937_64 rng(*order_seed);
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[rng() % i]);
        for (auto x : order) eliminate(edges, x);
    } else {
        // Min-degree order, recomputed after each elimination; ties broken
        // by the canonical marking order of the vertices.
        std::vector<std::size_t> remaining(g.vertices.size());
        for (std::size_t i = 0; i < remaining.size(); ++i) remaining[i] = i;
        while (!remaining.empty()) {
            auto deg = degrees(edges);
            std::size_t best = 0;
            for (std::size_t i = 1; i < remaining.size(); ++i) {
                std::size_t di = deg[remaining[i]], db = deg[remaining[best]];
                if (di < db ||
                    (di == db && g.vertices[remaining[i]] < g.vertices[remaining[best]]))
                    best = i;
            }
            eliminate(edges, remaining[best]);
            remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best));
        }
    }

    auto it = edges.find({source, sink});
    return it == edges.end() ? empty_relation(domain) : it->second;
}

std::map<Symbol, GlobalRelation> lift_all(const Negotiation& n,
                                          std::shared_ptr<const Domain> domain) {
    std::map<Symbol, GlobalRelation> lifted;
    for (const auto& [id, atom] : n.atoms)
        for (const auto& [r, t] : atom.delta)
            lifted.emplace(id + "\x1f" + r, lift(n, t, domain));
    return lifted;
}

} // namespace

Summary summarize_statespace(const Negotiation& n, const SummarizeOptions& opts) {
    Summary s;
    s.verdict = check_soundness(n, opts.budget);
    if (!s.verdict.sound) return s;

    ReachabilityGraph g = reach(n, opts.budget);
    auto domain = std::make_shared<const Domain>(Domain::of(n));
    auto lifted = lift_all(n, domain);
    for (const auto& r : n.atom(n.final).outcomes)
        s.relations.emplace(r, path_sum(n, g, lifted, domain, r,
                                        opts.elimination_order_seed));
    return s;
}

Summary brute_force_summary(const Negotiation& n, const ExploreBudget& budget) {
    if (!is_acyclic(n))
        throw PreconditionError("brute_force_summary requires an acyclic negotiation");

    Summary s;
    s.verdict = check_soundness(n, budget);
    if (!s.verdict.sound) return s;

    ReachabilityGraph g = reach(n, budget);
    auto domain = std::make_shared<const Domain>(Domain::of(n));
    auto lifted = lift_all(n, domain);
    for (const auto& r : n.atom(n.final).outcomes)
        s.relations.emplace(r, empty_relation(domain));

    // Enumerate every large step and fold its composed transformer into the
    // relation of its last (final) outcome.
    auto dfs = [&](auto&& self, std::size_t v, const GlobalRelation& acc) -> void {
        for (auto ei : g.out[v]) {
            const SmallStep& e = g.edges[ei];
            GlobalRelation next = compose(acc, lifted.at(e.atom + "\x1f" + e.outcome));
            if (g.final && e.to == *g.final) {
                auto it = s.relations.find(e.outcome);
                it->second = unite(it->second, next);
            } else {
                self(self, e.to, next);
            }
        }
    };
    dfs(dfs, g.initial, identity_relation(domain));
    return s;
}

EquivalenceResult equivalent(const Negotiation& a, const Negotiation& b,
                             const ExploreBudget& budget) {
    if (a.agents != b.agents)
        throw PreconditionError("equivalent: agent sets or state spaces differ");

    Summary sa = summarize_statespace(a, SummarizeOptions{budget, {}});
    Summary sb = summarize_statespace(b, SummarizeOptions{budget, {}});

    if (!sa.verdict.sound && !sb.verdict.sound) return {true, "both unsound"};
    if (sa.verdict.sound != sb.verdict.sound)
        return {false, sa.verdict.sound ? "first is sound, second is unsound"
                                        : "first is unsound, second is sound"};

    auto outcomes_of = [](const Summary& s) {
        std::vector<Symbol> out;
        for (const auto& [r, _] : s.relations) out.push_back(r);
        return out;
    };
    if (outcomes_of(sa) != outcomes_of(sb)) return {false, "final outcomes differ"};
    for (const auto& [r, rel] : sa.relations)
        if (!(rel == sb.relations.at(r)))
            return {false, "summary differs for final outcome '" + r + "'"};
    return {true, "both sound with equal summaries"};
}

} // namespace neg

#include "neg/analysis.hpp"

#include <algorithm>
#include <deque>

namespace neg {

SoundnessVerdict check_soundness(const Negotiation& n, const ExploreBudget& budget) {
    ReachabilityGraph g = reach(n, budget);
    SoundnessVerdict verdict;

    // (a) every atom appears at some arc of the reachability graph
    std::set<Symbol> fired;
    for (const auto& e : g.edges) fired.insert(e.atom);
    for (const auto& [id, atom] : n.atoms)
        if (!fired.count(id)) verdict.unreached_atoms.insert(id);

    // (b) from every reachable marking the final marking stays reachable;
    // decided by backward reachability from x_f.
    std::vector<char> can_finish(g.vertices.size(), 0);
    if (g.final) {
        std::vector<std::vector<std::size_t>> rev(g.vertices.size());
        for (std::size_t i = 0; i < g.edges.size(); ++i)
            rev[g.edges[i].to].push_back(g.edges[i].from);
        std::deque<std::size_t> work{*g.final};
        can_finish[*g.final] = 1;
        while (!work.empty()) {
            std::size_t v = work.front();
            work.pop_front();
            for (auto u : rev[v])
                if (!can_finish[u]) {
                    can_finish[u] = 1;
                    work.push_back(u);
                }
        }
    }

    std::optional<std::size_t> failing;
    for (std::size_t v = 0; v < g.vertices.size(); ++v)
        if (!can_finish[v]) {
            failing = v;
            break;
        }

    if (failing) {
        // Vertex ids follow BFS discovery, so re-running the same BFS yields
        // shortest parent edges and the first failing id is a closest witness.
        std::vector<std::optional<std::size_t>> parent_edge(g.vertices.size());
        std::vector<char> seen(g.vertices.size(), 0);
        std::deque<std::size_t> work{g.initial};
        seen[g.initial] = 1;
        while (!work.empty()) {
            std::size_t v = work.front();
            work.pop_front();
            for (auto ei : g.out[v]) {
                std::size_t w = g.edges[ei].to;
                if (!seen[w]) {
                    seen[w] = 1;
                    parent_edge[w] = ei;
                    work.push_back(w);
                }
            }
        }
        std::vector<std::pair<Symbol, Symbol>> path;
        for (std::size_t v = *failing; parent_edge[v];) {
            const SmallStep& e = g.edges[*parent_edge[v]];
            path.emplace_back(e.atom, e.outcome);
            v = e.from;
        }
        std::reverse(path.begin(), path.end());
        verdict.witness = std::move(path);
    }

    verdict.sound = verdict.unreached_atoms.empty() && !verdict.witness;
    return verdict;
}

std::map<Symbol, std::set<Symbol>> atom_graph(const Negotiation& n) {
    std::map<Symbol, std::set<Symbol>> g;
    for (const auto& [id, atom] : n.atoms) g[id];
    for (const auto& [key, targets] : n.transitions)
        g[key.atom].insert(targets.begin(), targets.end());
    return g;
}

bool is_acyclic(const Negotiation& n) {
    auto g = atom_graph(n);
    std::map<Symbol, int> state; // 0 unvisited, 1 on stack, 2 done
    auto dfs = [&](auto&& self, const Symbol& v) -> bool {
        state[v] = 1;
        for (const auto& w : g[v]) {
            if (state[w] == 1) return false;
            if (state[w] == 0 && !self(self, w)) return false;
        }
        state[v] = 2;
        return true;
    };
    for (const auto& [id, _] : g)
        if (state[id] == 0 && !dfs(dfs, id)) return false;
    return true;
}

Classification classify(const Negotiation& n) {
    Classification c;
    c.acyclic = is_acyclic(n);

    for (const auto& agent : n.agents) {
        bool det = true;
        for (const auto& [key, targets] : n.transitions) {
            if (key.agent != agent.name || key.atom == n.final) continue;
            if (targets.size() != 1) {
                det = false;
                break;
            }
        }
        if (det) c.deterministic_agents.insert(agent.name);
    }
    c.deterministic = c.deterministic_agents.size() == n.agents.size();

    c.weakly_deterministic = true;
    for (const auto& [key, targets] : n.transitions) {
        if (key.atom == n.final) continue;
        bool witnessed = false;
        for (const auto& b : c.deterministic_agents) {
            bool in_all = true;
            for (const auto& t : targets)
                if (!n.atom(t).has_party(b)) {
                    in_all = false;
                    break;
                }
            if (in_all) {
                witnessed = true;
                break;
            }
        }
        if (!witnessed) {
            c.weakly_deterministic = false;
            break;
        }
    }
    return c;
}

} // namespace neg

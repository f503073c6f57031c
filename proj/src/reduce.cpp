#include "neg/reduce.hpp"

#include "neg/analysis.hpp"
#include "neg/errors.hpp"
#include "neg/io.hpp"

#include <algorithm>
#include <cassert>
#include <deque>

namespace neg {

namespace {

Symbol fresh_outcome(Symbol base, const std::vector<Symbol>& taken) {
    while (std::find(taken.begin(), taken.end(), base) != taken.end()) base += "'";
    return base;
}

// In debug builds, re-validate after every rule application to catch
// rewiring mistakes immediately.
#ifndef NDEBUG
void debug_validate(const Negotiation& n) {
    auto violations = validate(n);
    assert(violations.empty());
    (void)violations;
}
#else
void debug_validate(const Negotiation&) {}
#endif

/// Triples (atom, agent, outcome) whose target set references `target`.
std::vector<TransitionKey> references_to(const Negotiation& n, const Symbol& target) {
    std::vector<TransitionKey> refs;
    for (const auto& [key, targets] : n.transitions)
        if (targets.count(target)) refs.push_back(key);
    return refs;
}

} // namespace

bool unconditionally_enables(const Negotiation& n, const Symbol& atom,
                             const Symbol& outcome, const Symbol& target) {
    const Atom& a = n.atom(atom);
    const Atom& t = n.atom(target);
    if (!a.has_outcome(outcome))
        throw PreconditionError("atom " + atom + " has no outcome '" + outcome + "'");
    if (!std::includes(a.parties.begin(), a.parties.end(),
                       t.parties.begin(), t.parties.end()))
        return false;
    for (const auto& p : t.parties) {
        const auto& targets = n.targets(atom, p, outcome);
        if (targets.size() != 1 || !targets.count(target)) return false;
    }
    return true;
}

std::vector<MergeCandidate> find_merge(const Negotiation& n) {
    std::vector<MergeCandidate> out;
    for (const auto& [id, atom] : n.atoms) {
        if (id == n.final) continue;
        std::vector<Symbol> sorted = atom.outcomes;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < sorted.size(); ++i)
            for (std::size_t j = i + 1; j < sorted.size(); ++j) {
                bool same = true;
                for (const auto& p : atom.parties)
                    if (n.targets(id, p, sorted[i]) != n.targets(id, p, sorted[j])) {
                        same = false;
                        break;
                    }
                if (same) out.push_back(MergeCandidate{id, sorted[i], sorted[j]});
            }
    }
    return out;
}

std::pair<Negotiation, RuleApplication>
apply_merge_traced(const Negotiation& n, const Symbol& atom_id, const Symbol& r1,
                   const Symbol& r2) {
    const Atom& atom = n.atom(atom_id);
    if (atom_id == n.final)
        throw PreconditionError("merge guard violated: final outcomes are observable");
    if (r1 == r2 || !atom.has_outcome(r1) || !atom.has_outcome(r2))
        throw PreconditionError("merge guard violated: need two distinct outcomes of " + atom_id);
    for (const auto& p : atom.parties)
        if (n.targets(atom_id, p, r1) != n.targets(atom_id, p, r2))
            throw PreconditionError("merge guard violated: target sets differ for party " + p);

    Negotiation out = n;
    Atom& a = out.atoms.at(atom_id);

    std::vector<Symbol> rest;
    for (const auto& r : a.outcomes)
        if (r != r1 && r != r2) rest.push_back(r);
    const Symbol lo = std::min(r1, r2), hi = std::max(r1, r2);
    Symbol fresh = fresh_outcome("merge(" + lo + "," + hi + ")", rest);

    // fresh outcome takes the position of the earlier operand
    std::vector<Symbol> outcomes;
    bool placed = false;
    for (const auto& r : a.outcomes) {
        if (r == r1 || r == r2) {
            if (!placed) outcomes.push_back(fresh);
            placed = true;
        } else {
            outcomes.push_back(r);
        }
    }
    a.outcomes = std::move(outcomes);

    for (const auto& p : a.parties) {
        out.set_transition(atom_id, p, fresh, n.targets(atom_id, p, r1));
        out.transitions.erase(TransitionKey{atom_id, p, r1});
        out.transitions.erase(TransitionKey{atom_id, p, r2});
    }
    a.delta[fresh] = unite_local(atom.delta.at(r1), atom.delta.at(r2));
    a.delta.erase(r1);
    a.delta.erase(r2);

    debug_validate(out);

    RuleApplication rec;
    rec.rule = RuleApplication::Rule::merge;
    rec.atom = atom_id;
    rec.r1 = lo;
    rec.r2 = hi;
    rec.fresh[lo] = fresh;
    rec.atoms_before = n.atoms.size();
    rec.atoms_after = out.atoms.size();
    return {std::move(out), std::move(rec)};
}

Negotiation apply_merge(const Negotiation& n, const Symbol& atom,
                        const Symbol& r1, const Symbol& r2) {
    return apply_merge_traced(n, atom, r1, r2).first;
}

namespace {

bool shortcut_guard(const Negotiation& n, const Symbol& atom, const Symbol& outcome,
                    const Symbol& target, std::string* why = nullptr) {
    auto reject = [&](const char* msg) {
        if (why) *why = msg;
        return false;
    };
    if (atom == target) return reject("target equals the acting atom");
    if (!unconditionally_enables(n, atom, outcome, target))
        return reject("(atom, outcome) does not unconditionally enable the target");

    if (target == n.final) {
        // Absorption: the final atom must be referenced only by this
        // outcome, and this outcome must be the atom's only one, so that
        // the acting atom can become final with all-empty target sets.
        if (n.atom(atom).outcomes.size() != 1)
            return reject("final-atom shortcut requires a single-outcome atom");
        for (const auto& key : references_to(n, target))
            if (key.atom != atom || key.outcome != outcome)
                return reject("final atom has other incoming references");
        return true;
    }

    // Side condition: any surviving reference to the target must include an
    // exact arc. "Surviving" means every triple other than the rewired
    // (atom, *, outcome) ones, including other outcomes of the same atom.
    bool has_other = false;
    bool has_exact = false;
    for (const auto& key : references_to(n, target)) {
        if (key.atom == atom && key.outcome == outcome) continue;
        has_other = true;
        const auto& set = n.targets(key.atom, key.agent, key.outcome);
        if (set.size() == 1) has_exact = true;
    }
    if (has_other && !has_exact)
        return reject("no exact arc among the target's other references");
    if (!has_other && target == n.initial)
        return reject("removing the initial atom");
    return true;
}

} // namespace

std::vector<ShortcutCandidate> find_shortcut(const Negotiation& n) {
    std::vector<ShortcutCandidate> out;
    for (const auto& [id, atom] : n.atoms)
        for (const auto& r : atom.outcomes)
            for (const auto& [tid, _] : n.atoms)
                if (shortcut_guard(n, id, r, tid))
                    out.push_back(ShortcutCandidate{id, r, tid});
    return out;
}

std::vector<ShortcutCandidate> find_d_shortcut(const Negotiation& n) {
    std::vector<ShortcutCandidate> out;
    for (const auto& c : find_shortcut(n))
        if (c.target == n.final || n.atom(c.target).outcomes.size() == 1)
            out.push_back(c);
    return out;
}

std::pair<Negotiation, RuleApplication>
apply_shortcut_traced(const Negotiation& n, const Symbol& atom_id,
                      const Symbol& outcome, const Symbol& target, bool d_rule) {
    std::string why;
    if (!shortcut_guard(n, atom_id, outcome, target, &why))
        throw PreconditionError("shortcut guard violated: " + why);
    if (d_rule && target != n.final && n.atom(target).outcomes.size() != 1)
        throw PreconditionError("d-shortcut guard violated: target has several outcomes");

    const Atom& acting = n.atom(atom_id);
    const Atom& tgt = n.atom(target);
    const bool absorbing = target == n.final;

    std::map<Symbol, std::set<Symbol>> saved; // X(atom, a, outcome) per party
    for (const auto& p : acting.parties) saved[p] = n.targets(atom_id, p, outcome);

    std::vector<Symbol> rest;
    for (const auto& r : acting.outcomes)
        if (r != outcome) rest.push_back(r);

    // Fresh names per target outcome. Absorbing the final atom keeps the
    // final outcome names, which is what makes the result equivalent.
    std::map<Symbol, Symbol> fresh;
    {
        std::vector<Symbol> taken = rest;
        for (const auto& r : tgt.outcomes) {
            Symbol f = absorbing ? r
                                 : fresh_outcome("via(" + outcome + ";" + r + ")", taken);
            fresh[r] = f;
            taken.push_back(f);
        }
    }

    Negotiation out = n;
    Atom& a = out.atoms.at(atom_id);

    std::vector<Symbol> outcomes;
    for (const auto& r : a.outcomes) {
        if (r == outcome)
            for (const auto& tr : tgt.outcomes) outcomes.push_back(fresh.at(tr));
        else
            outcomes.push_back(r);
    }
    a.outcomes = std::move(outcomes);

    // Erase the consumed outcome first: when the final atom is absorbed the
    // fresh names coincide with the target's outcome names and may equal it.
    for (const auto& p : acting.parties) out.transitions.erase(TransitionKey{atom_id, p, outcome});
    a.delta.erase(outcome);
    for (const auto& tr : tgt.outcomes) {
        const Symbol& f = fresh.at(tr);
        for (const auto& p : acting.parties) {
            if (tgt.has_party(p))
                out.set_transition(atom_id, p, f, n.targets(target, p, tr));
            else
                out.set_transition(atom_id, p, f, saved.at(p));
        }
        a.delta[f] = compose_local(acting.delta.at(outcome),
                                   extend_local(n, tgt.delta.at(tr), acting.parties));
    }

    if (references_to(out, target).empty()) {
        for (const auto& p : tgt.parties)
            for (const auto& r : tgt.outcomes)
                out.transitions.erase(TransitionKey{target, p, r});
        out.atoms.erase(target);
        if (absorbing) out.final = atom_id;
    }

    debug_validate(out);

    RuleApplication rec;
    rec.rule = d_rule ? RuleApplication::Rule::d_shortcut : RuleApplication::Rule::shortcut;
    rec.atom = atom_id;
    rec.outcome = outcome;
    rec.target = target;
    rec.fresh = fresh;
    rec.atoms_before = n.atoms.size();
    rec.atoms_after = out.atoms.size();
    return {std::move(out), std::move(rec)};
}

Negotiation apply_shortcut(const Negotiation& n, const Symbol& atom,
                           const Symbol& outcome, const Symbol& target) {
    return apply_shortcut_traced(n, atom, outcome, target, false).first;
}

std::vector<UselessArcCandidate> find_useless_arc(const Negotiation& n) {
    std::vector<UselessArcCandidate> out;
    for (const auto& [key, targets] : n.transitions) {
        if (targets.size() < 2) continue;
        const Atom& atom = n.atom(key.atom);
        for (const auto& kept : targets)
            for (const auto& removed : targets) {
                if (kept == removed) continue;
                const Atom& ka = n.atom(kept);
                const Atom& ra = n.atom(removed);
                if (!ka.has_party(key.agent) || !ra.has_party(key.agent)) continue;
                bool witnessed = false;
                for (const auto& b : atom.parties) {
                    if (!ka.has_party(b) || !ra.has_party(b)) continue;
                    const auto& bt = n.targets(key.atom, b, key.outcome);
                    if (bt.size() == 1 && bt.count(kept)) {
                        witnessed = true;
                        break;
                    }
                }
                if (witnessed)
                    out.push_back(UselessArcCandidate{key.atom, key.agent, key.outcome,
                                                      kept, removed});
            }
    }
    return out;
}

std::pair<Negotiation, RuleApplication>
apply_useless_arc_traced(const Negotiation& n, const Symbol& atom,
                         const Symbol& agent, const Symbol& outcome,
                         const Symbol& kept, const Symbol& removed) {
    UselessArcCandidate wanted{atom, agent, outcome, kept, removed};
    auto candidates = find_useless_arc(n);
    if (std::find(candidates.begin(), candidates.end(), wanted) == candidates.end())
        throw PreconditionError("useless-arc guard violated for (" + atom + ", " + agent +
                                ", " + outcome + ")");

    Negotiation out = n;
    out.transitions.at(TransitionKey{atom, agent, outcome}).erase(removed);

    debug_validate(out);

    RuleApplication rec;
    rec.rule = RuleApplication::Rule::useless_arc;
    rec.atom = atom;
    rec.agent = agent;
    rec.outcome = outcome;
    rec.kept = kept;
    rec.removed = removed;
    rec.atoms_before = n.atoms.size();
    rec.atoms_after = out.atoms.size();
    return {std::move(out), std::move(rec)};
}

Negotiation apply_useless_arc(const Negotiation& n, const Symbol& atom,
                              const Symbol& agent, const Symbol& outcome,
                              const Symbol& kept, const Symbol& removed) {
    return apply_useless_arc_traced(n, atom, agent, outcome, kept, removed).first;
}

const char* rule_name(RuleApplication::Rule r) {
    switch (r) {
        case RuleApplication::Rule::merge: return "merge";
        case RuleApplication::Rule::shortcut: return "shortcut";
        case RuleApplication::Rule::d_shortcut: return "d-shortcut";
        case RuleApplication::Rule::useless_arc: return "useless-arc";
    }
    return "?";
}

ReductionResult reduce_weakly_deterministic(const Negotiation& n) {
    Classification c = classify(n);
    if (!c.acyclic)
        throw PreconditionError("reduce_weakly_deterministic requires an acyclic negotiation");
    if (!c.weakly_deterministic)
        throw PreconditionError("reduce_weakly_deterministic requires a weakly deterministic negotiation");

    constexpr std::size_t kApplicationCap = 1'000'000;
    ReductionResult res{n, ReductionTrace{fingerprint(n), {}}};
    while (res.trace.applications.size() < kApplicationCap) {
        if (auto sc = find_shortcut(res.result); !sc.empty()) {
            auto [next, rec] = apply_shortcut_traced(res.result, sc[0].atom, sc[0].outcome,
                                                     sc[0].target, false);
            res.result = std::move(next);
            res.trace.applications.push_back(std::move(rec));
            continue;
        }
        if (auto uc = find_useless_arc(res.result); !uc.empty()) {
            auto [next, rec] = apply_useless_arc_traced(res.result, uc[0].atom, uc[0].agent,
                                                        uc[0].outcome, uc[0].kept, uc[0].removed);
            res.result = std::move(next);
            res.trace.applications.push_back(std::move(rec));
            continue;
        }
        if (auto mc = find_merge(res.result); !mc.empty()) {
            auto [next, rec] = apply_merge_traced(res.result, mc[0].atom, mc[0].r1, mc[0].r2);
            res.result = std::move(next);
            res.trace.applications.push_back(std::move(rec));
            continue;
        }
        return res;
    }
    throw NegotiationError("reduction exceeded the application budget");
}

Metrics metrics(const Negotiation& n, const ExploreBudget& budget) {
    if (!is_acyclic(n)) throw PreconditionError("metrics requires an acyclic negotiation");
    ReachabilityGraph g = reach(n, budget);

    const std::size_t inf = static_cast<std::size_t>(-1);
    std::vector<std::size_t> from_start(g.vertices.size(), inf);
    from_start[g.initial] = 0;
    std::deque<std::size_t> work{g.initial};
    while (!work.empty()) {
        std::size_t v = work.front();
        work.pop_front();
        for (auto ei : g.out[v]) {
            std::size_t w = g.edges[ei].to;
            if (from_start[w] == inf) {
                from_start[w] = from_start[v] + 1;
                work.push_back(w);
            }
        }
    }

    // Shortest completion into any maximal vertex (no outgoing steps);
    // for sound inputs that is exactly the final marking.
    std::vector<std::vector<std::size_t>> rev(g.vertices.size());
    for (const auto& e : g.edges) rev[e.to].push_back(e.from);
    std::vector<std::size_t> to_sink(g.vertices.size(), inf);
    std::deque<std::size_t> bwork;
    for (std::size_t v = 0; v < g.vertices.size(); ++v)
        if (g.out[v].empty()) {
            to_sink[v] = 0;
            bwork.push_back(v);
        }
    while (!bwork.empty()) {
        std::size_t v = bwork.front();
        bwork.pop_front();
        for (auto u : rev[v])
            if (to_sink[u] == inf) {
                to_sink[u] = to_sink[v] + 1;
                bwork.push_back(u);
            }
    }

    Metrics m;
    for (const auto& e : g.edges) {
        std::size_t len = from_start[e.from] + 1 + to_sink[e.to];
        auto key = std::make_pair(e.atom, e.outcome);
        auto it = m.shoc_per_pair.find(key);
        if (it == m.shoc_per_pair.end())
            m.shoc_per_pair.emplace(key, len - 1);
        else
            it->second = std::min(it->second, len - 1);
    }
    for (const auto& [_, v] : m.shoc_per_pair) m.shoc += v;
    for (const auto& [id, atom] : n.atoms)
        if (id != n.final) m.out += atom.outcomes.size();
    return m;
}

namespace {

/// Longest path (edge count) from every atom to the final atom.
std::map<Symbol, std::size_t> longest_to_final(const Negotiation& n) {
    auto g = atom_graph(n);
    std::map<Symbol, std::size_t> l;
    auto solve = [&](auto&& self, const Symbol& v) -> std::size_t {
        auto it = l.find(v);
        if (it != l.end()) return it->second;
        std::size_t best = 0;
        for (const auto& w : g[v]) best = std::max(best, 1 + self(self, w));
        return l[v] = best;
    };
    for (const auto& [id, _] : n.atoms) solve(solve, id);
    return l;
}

} // namespace

SdanResult reduce_sdan(const Negotiation& n, const ExploreBudget& budget) {
    Classification c = classify(n);
    if (!c.acyclic)
        throw PreconditionError("reduce_sdan requires an acyclic negotiation");
    if (!c.deterministic)
        throw PreconditionError("reduce_sdan requires a deterministic negotiation");

    SdanResult res;
    res.result = n;
    res.trace.source_fingerprint = fingerprint(n);
    res.bounds = metrics(n, budget);

    constexpr std::size_t kApplicationCap = 1'000'000;
    while (res.trace.applications.size() < kApplicationCap) {
        while (res.trace.applications.size() < kApplicationCap) {
            auto mc = find_merge(res.result);
            if (mc.empty()) break;
            auto [next, rec] = apply_merge_traced(res.result, mc[0].atom, mc[0].r1, mc[0].r2);
            res.result = std::move(next);
            res.trace.applications.push_back(std::move(rec));
            ++res.merge_count;
        }
        auto dc = find_d_shortcut(res.result);
        if (dc.empty()) return res;
        auto depth = longest_to_final(res.result);
        std::size_t best = 0;
        for (std::size_t i = 1; i < dc.size(); ++i)
            if (depth.at(dc[i].target) < depth.at(dc[best].target)) best = i;
        auto [next, rec] = apply_shortcut_traced(res.result, dc[best].atom, dc[best].outcome,
                                                 dc[best].target, true);
        res.result = std::move(next);
        res.trace.applications.push_back(std::move(rec));
        ++res.d_shortcut_count;
    }
    throw NegotiationError("reduction exceeded the application budget");
}

Negotiation replay(const Negotiation& source, const ReductionTrace& trace) {
    if (!trace.source_fingerprint.empty() &&
        trace.source_fingerprint != fingerprint(source))
        throw PreconditionError("trace fingerprint does not match the source negotiation");

    Negotiation cur = source;
    for (std::size_t i = 0; i < trace.applications.size(); ++i) {
        const RuleApplication& app = trace.applications[i];
        if (cur.atoms.size() != app.atoms_before)
            throw PreconditionError("trace step " + std::to_string(i) +
                                    ": atom count differs from the recording");
        std::pair<Negotiation, RuleApplication> applied = [&] {
            switch (app.rule) {
                case RuleApplication::Rule::merge:
                    return apply_merge_traced(cur, app.atom, app.r1, app.r2);
                case RuleApplication::Rule::shortcut:
                    return apply_shortcut_traced(cur, app.atom, app.outcome, app.target, false);
                case RuleApplication::Rule::d_shortcut:
                    return apply_shortcut_traced(cur, app.atom, app.outcome, app.target, true);
                case RuleApplication::Rule::useless_arc:
                    return apply_useless_arc_traced(cur, app.atom, app.agent, app.outcome,
                                                    app.kept, app.removed);
            }
            throw PreconditionError("trace step " + std::to_string(i) + ": unknown rule");
        }();
        if (applied.second.fresh != app.fresh)
            throw PreconditionError("trace step " + std::to_string(i) +
                                    ": fresh names differ from the recording");
        if (applied.second.atoms_after != app.atoms_after)
            throw PreconditionError("trace step " + std::to_string(i) +
                                    ": resulting atom count differs from the recording");
        cur = std::move(applied.first);
    }
    return cur;
}

} // namespace neg

#include "neg/model.hpp"

#include "neg/errors.hpp"

#include <algorithm>
#include <sstream>

namespace neg {

bool Atom::has_party(const Symbol& agent) const {
    return std::binary_search(parties.begin(), parties.end(), agent);
}

bool Atom::has_outcome(const Symbol& outcome) const {
    return std::find(outcomes.begin(), outcomes.end(), outcome) != outcomes.end();
}

void Negotiation::add_agent(const Symbol& name, std::vector<Symbol> states) {
    auto pos = std::lower_bound(agents.begin(), agents.end(), name,
                                [](const Agent& a, const Symbol& s) { return a.name < s; });
    agents.insert(pos, Agent{name, std::move(states)});
}

Atom& Negotiation::add_atom(const Symbol& id, std::vector<Symbol> parties,
                            std::vector<Symbol> outcomes) {
    std::sort(parties.begin(), parties.end());
    Atom a{id, std::move(parties), std::move(outcomes), {}};
    return atoms.emplace(id, std::move(a)).first->second;
}

void Negotiation::set_transition(const Symbol& atom, const Symbol& agent,
                                 const Symbol& outcome, std::set<Symbol> targets) {
    transitions[TransitionKey{atom, agent, outcome}] = std::move(targets);
}

void Negotiation::set_delta(const Symbol& atom, const Symbol& outcome, Transformer t) {
    atoms.at(atom).delta[outcome] = std::move(t);
}

const Agent* Negotiation::find_agent(const Symbol& name) const {
    auto it = std::lower_bound(agents.begin(), agents.end(), name,
                               [](const Agent& a, const Symbol& s) { return a.name < s; });
    if (it != agents.end() && it->name == name) return &*it;
    return nullptr;
}

const Atom* Negotiation::find_atom(const Symbol& id) const {
    auto it = atoms.find(id);
    return it == atoms.end() ? nullptr : &it->second;
}

const Atom& Negotiation::atom(const Symbol& id) const {
    auto it = atoms.find(id);
    if (it == atoms.end()) throw PreconditionError("unknown atom '" + id + "'");
    return it->second;
}

const std::set<Symbol>& Negotiation::targets(const Symbol& atom, const Symbol& agent,
                                             const Symbol& outcome) const {
    auto it = transitions.find(TransitionKey{atom, agent, outcome});
    if (it == transitions.end())
        throw PreconditionError("transition undefined for (" + atom + ", " + agent +
                                ", " + outcome + ")");
    return it->second;
}

std::vector<Symbol> Negotiation::agent_names() const {
    std::vector<Symbol> names;
    names.reserve(agents.size());
    for (const auto& a : agents) names.push_back(a.name);
    return names;
}

const std::vector<Symbol>& Negotiation::states_of(const Symbol& agent) const {
    const Agent* a = find_agent(agent);
    if (!a) throw PreconditionError("unknown agent '" + agent + "'");
    return a->states;
}

std::vector<Tuple> enumerate_product(const std::vector<std::vector<Symbol>>& spaces) {
    std::vector<Tuple> out{Tuple{}};
    for (const auto& space : spaces) {
        std::vector<Tuple> next;
        next.reserve(out.size() * space.size());
        for (const auto& prefix : out)
            for (const auto& s : space) {
                Tuple t = prefix;
                t.push_back(s);
                next.push_back(std::move(t));
            }
        out = std::move(next);
    }
    return out;
}

namespace {

std::vector<std::vector<Symbol>> party_spaces(const Negotiation& n,
                                              const std::vector<Symbol>& parties) {
    std::vector<std::vector<Symbol>> spaces;
    spaces.reserve(parties.size());
    for (const auto& p : parties) spaces.push_back(n.states_of(p));
    return spaces;
}

std::string tuple_text(const Tuple& t) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i) os << ',';
        os << t[i];
    }
    os << ')';
    return os.str();
}

} // namespace

Transformer identity_transformer(const Negotiation& n,
                                 const std::vector<Symbol>& parties) {
    Transformer t;
    t.parties = parties;
    std::sort(t.parties.begin(), t.parties.end());
    for (auto& tuple : enumerate_product(party_spaces(n, t.parties)))
        t.pairs.emplace(tuple, tuple);
    return t;
}

bool is_identity(const Negotiation& n, const Transformer& t) {
    std::size_t product = 1;
    for (const auto& p : t.parties) product *= n.states_of(p).size();
    if (t.pairs.size() != product) return false;
    for (const auto& [in, out] : t.pairs)
        if (in != out) return false;
    return true;
}

Transformer unite_local(const Transformer& a, const Transformer& b) {
    if (a.parties != b.parties)
        throw PreconditionError("transformer union over mismatched party sets");
    Transformer out = a;
    out.pairs.insert(b.pairs.begin(), b.pairs.end());
    return out;
}

Transformer compose_local(const Transformer& a, const Transformer& b) {
    if (a.parties != b.parties)
        throw PreconditionError("transformer composition over mismatched party sets");
    std::map<Tuple, std::set<Tuple>> succ;
    for (const auto& [in, out] : b.pairs) succ[in].insert(out);
    Transformer result;
    result.parties = a.parties;
    for (const auto& [in, mid] : a.pairs) {
        auto it = succ.find(mid);
        if (it == succ.end()) continue;
        for (const auto& out : it->second) result.pairs.emplace(in, out);
    }
    return result;
}

Transformer extend_local(const Negotiation& n, const Transformer& t,
                         const std::vector<Symbol>& parties) {
    std::vector<Symbol> wide = parties;
    std::sort(wide.begin(), wide.end());
    if (!std::includes(wide.begin(), wide.end(), t.parties.begin(), t.parties.end()))
        throw PreconditionError("extend_local target parties must include the source parties");
    if (wide == t.parties) return t;

    // Positions of the old parties and of the added ones inside the wide tuple.
    std::vector<std::size_t> old_pos;
    std::vector<std::size_t> new_pos;
    for (std::size_t i = 0; i < wide.size(); ++i) {
        if (std::binary_search(t.parties.begin(), t.parties.end(), wide[i]))
            old_pos.push_back(i);
        else
            new_pos.push_back(i);
    }
    std::vector<std::vector<Symbol>> added_spaces;
    for (auto i : new_pos) added_spaces.push_back(n.states_of(wide[i]));

    Transformer out;
    out.parties = wide;
    for (const auto& fill : enumerate_product(added_spaces)) {
        for (const auto& [in, to] : t.pairs) {
            Tuple win(wide.size()), wout(wide.size());
            for (std::size_t k = 0; k < old_pos.size(); ++k) {
                win[old_pos[k]]  = in[k];
                wout[old_pos[k]] = to[k];
            }
            for (std::size_t k = 0; k < new_pos.size(); ++k) {
                win[new_pos[k]]  = fill[k];
                wout[new_pos[k]] = fill[k];
            }
            out.pairs.emplace(std::move(win), std::move(wout));
        }
    }
    return out;
}

std::vector<std::string> validate(const Negotiation& n) {
    std::vector<std::string> v;
    auto fail = [&v](const std::string& msg) { v.push_back(msg); };

    if (n.agents.empty()) fail("negotiation has no agents");
    for (std::size_t i = 0; i < n.agents.size(); ++i) {
        const Agent& a = n.agents[i];
        if (a.name.empty()) fail("agent with empty name");
        if (i > 0 && !(n.agents[i - 1].name < a.name))
            fail("agents not unique or not in canonical order near '" + a.name + "'");
        if (a.states.empty()) fail("agent " + a.name + ": empty state space");
        std::set<Symbol> seen;
        for (const auto& s : a.states)
            if (!seen.insert(s).second)
                fail("agent " + a.name + ": duplicate state '" + s + "'");
    }

    if (n.atoms.empty()) fail("negotiation has no atoms");
    if (!n.find_atom(n.initial)) fail("initial atom '" + n.initial + "' does not exist");
    if (!n.find_atom(n.final)) fail("final atom '" + n.final + "' does not exist");

    for (const auto& [id, atom] : n.atoms) {
        if (id != atom.id) fail("atom '" + id + "': id field mismatch");
        if (atom.parties.empty()) fail("atom " + id + ": no parties");
        if (!std::is_sorted(atom.parties.begin(), atom.parties.end()) ||
            std::adjacent_find(atom.parties.begin(), atom.parties.end()) != atom.parties.end())
            fail("atom " + id + ": parties not unique/sorted");
        for (const auto& p : atom.parties)
            if (!n.find_agent(p)) fail("atom " + id + ": unknown party '" + p + "'");
        if (atom.outcomes.empty()) fail("atom " + id + ": no outcomes");
        {
            std::set<Symbol> seen;
            for (const auto& r : atom.outcomes)
                if (!seen.insert(r).second)
                    fail("atom " + id + ": duplicate outcome '" + r + "'");
        }

        // delta must be total on outcomes and carry the atom's party set
        for (const auto& r : atom.outcomes)
            if (!atom.delta.count(r))
                fail("atom " + id + ": no transformer for outcome '" + r + "'");
        for (const auto& [r, t] : atom.delta) {
            if (!atom.has_outcome(r)) {
                fail("atom " + id + ": transformer for unknown outcome '" + r + "'");
                continue;
            }
            if (t.parties != atom.parties) {
                fail("atom " + id + ", outcome " + r +
                     ": transformer parties differ from atom parties");
                continue;
            }
            bool tuples_ok = true;
            for (const auto& [in, out] : t.pairs) {
                for (const Tuple* tp : {&in, &out}) {
                    if (tp->size() != t.parties.size()) {
                        fail("atom " + id + ", outcome " + r + ": tuple " + tuple_text(*tp) +
                             " has wrong arity");
                        tuples_ok = false;
                        continue;
                    }
                    for (std::size_t k = 0; k < tp->size(); ++k) {
                        const auto& states = n.find_agent(t.parties[k])
                                                 ? n.states_of(t.parties[k])
                                                 : std::vector<Symbol>{};
                        if (std::find(states.begin(), states.end(), (*tp)[k]) == states.end()) {
                            fail("atom " + id + ", outcome " + r + ": state '" + (*tp)[k] +
                                 "' not in the state space of " + t.parties[k]);
                            tuples_ok = false;
                        }
                    }
                }
            }
            if (tuples_ok) {
                bool spaces_ok = true;
                for (const auto& p : t.parties)
                    if (!n.find_agent(p)) spaces_ok = false;
                if (spaces_ok) {
                    std::set<Tuple> covered;
                    for (const auto& [in, out] : t.pairs) covered.insert(in);
                    std::size_t product = 1;
                    for (const auto& p : t.parties) product *= n.states_of(p).size();
                    if (covered.size() != product)
                        fail("atom " + id + ", outcome " + r +
                             ": transformer is not left-total");
                }
            }
        }
    }

    // Every agent participates in both the initial and the final atom.
    if (const Atom* a0 = n.find_atom(n.initial))
        for (const auto& agent : n.agents)
            if (!a0->has_party(agent.name))
                fail("agent " + agent.name + " not party of initial atom");
    if (const Atom* af = n.find_atom(n.final))
        for (const auto& agent : n.agents)
            if (!af->has_party(agent.name))
                fail("agent " + agent.name + " not party of final atom");

    // The transition function is defined exactly on T(N).
    for (const auto& [id, atom] : n.atoms)
        for (const auto& p : atom.parties)
            for (const auto& r : atom.outcomes)
                if (!n.transitions.count(TransitionKey{id, p, r}))
                    fail("transition undefined for (" + id + ", " + p + ", " + r + ")");

    for (const auto& [key, targets] : n.transitions) {
        const Atom* atom = n.find_atom(key.atom);
        if (!atom) {
            fail("transition from unknown atom '" + key.atom + "'");
            continue;
        }
        if (!atom->has_party(key.agent)) {
            fail("transition (" + key.atom + ", " + key.agent + ", " + key.outcome +
                 "): agent is not a party of the atom");
            continue;
        }
        if (!atom->has_outcome(key.outcome)) {
            fail("transition (" + key.atom + ", " + key.agent + ", " + key.outcome +
                 "): unknown outcome");
            continue;
        }
        // Target sets are empty exactly for the final atom.
        if (key.atom == n.final) {
            if (!targets.empty())
                fail("final atom " + key.atom + " has outgoing transition for (" +
                     key.agent + ", " + key.outcome + ")");
        } else if (targets.empty()) {
            fail("empty transition set on non-final atom (" + key.atom + ", " +
                 key.agent + ", " + key.outcome + ")");
        }
        for (const auto& target : targets) {
            const Atom* ta = n.find_atom(target);
            if (!ta) {
                fail("transition (" + key.atom + ", " + key.agent + ", " + key.outcome +
                     "): unknown target atom '" + target + "'");
                continue;
            }
            // Targets must offer a port for the moving agent.
            if (!ta->has_party(key.agent))
                fail("transition (" + key.atom + ", " + key.agent + ", " + key.outcome +
                     "): agent is not a party of target '" + target + "'");
        }
    }

    return v;
}

} // namespace neg

#include "neg/generators.hpp"

#include "neg/analysis.hpp"
#include "neg/errors.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace neg {

bool is_tautology(const CnfClause& c) {
    for (const auto& lit : c.literals)
        if (c.literals.count(CnfLiteral{lit.var, !lit.positive})) return true;
    return false;
}

CnfFormula parse_dimacs(const std::string& text) {
    CnfFormula f;
    bool header_seen = false;
    long declared_clauses = -1;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    std::vector<CnfLiteral> pending;

    auto bad = [&](const std::string& msg) -> NegotiationError {
        return NegotiationError("dimacs line " + std::to_string(lineno) + ": " + msg);
    };

    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == 'c' || line[0] == '%') continue;
        std::istringstream ls(line);
        if (!header_seen) {
            std::string p, fmt;
            long vars = 0, clauses = 0;
            if (!(ls >> p >> fmt >> vars >> clauses) || p != "p" || fmt != "cnf")
                throw bad("expected 'p cnf <vars> <clauses>' header");
            if (vars < 0 || clauses < 0) throw bad("negative counts in header");
            f.num_vars = static_cast<unsigned>(vars);
            declared_clauses = clauses;
            header_seen = true;
            continue;
        }
        long v;
        while (ls >> v) {
            if (v == 0) {
                CnfClause c;
                c.literals.insert(pending.begin(), pending.end());
                f.clauses.push_back(std::move(c));
                pending.clear();
            } else {
                unsigned var = static_cast<unsigned>(v < 0 ? -v : v);
                if (var > f.num_vars) throw bad("literal exceeds declared variable count");
                pending.push_back(CnfLiteral{var, v > 0});
            }
        }
        if (!ls.eof()) throw bad("malformed literal");
    }
    if (!header_seen) {
        lineno = 1;
        throw bad("missing 'p cnf' header");
    }
    if (!pending.empty()) throw bad("clause not terminated by 0");
    if (declared_clauses >= 0 &&
        static_cast<std::size_t>(declared_clauses) != f.clauses.size())
        throw NegotiationError("dimacs: header declares " + std::to_string(declared_clauses) +
                               " clauses, found " + std::to_string(f.clauses.size()));
    return f;
}

namespace {

void check_times(const std::vector<Symbol>& times) {
    if (times.empty()) throw PreconditionError("times must be non-empty");
    std::set<Symbol> seen;
    for (const auto& t : times) {
        if (t == "angry") throw PreconditionError("'angry' cannot be a time state");
        if (!seen.insert(t).second) throw PreconditionError("duplicate time state '" + t + "'");
    }
}

/// Transformer of a bargaining round over two parties: on `yes` the pair
/// agrees on any time between the two proposals, on `no` both get angry,
/// on identity-style outcomes nothing changes. Inputs involving "angry"
/// pass through unchanged to keep the relation left-total.
Transformer bargain(const std::vector<Symbol>& parties,
                    const std::vector<Symbol>& times, bool agree) {
    Transformer t;
    t.parties = parties;
    std::vector<Symbol> states = times;
    states.push_back("angry");
    auto idx = [&times](const Symbol& s) {
        return std::find(times.begin(), times.end(), s) - times.begin();
    };
    for (const auto& x : states)
        for (const auto& y : states) {
            if (x == "angry" || y == "angry") {
                t.pairs.emplace(Tuple{x, y}, Tuple{x, y});
            } else if (agree) {
                auto i = idx(x), j = idx(y);
                auto lo = std::min(i, j), hi = std::max(i, j);
                for (auto k = lo; k <= hi; ++k)
                    t.pairs.emplace(Tuple{x, y}, Tuple{times[k], times[k]});
            } else {
                t.pairs.emplace(Tuple{x, y}, Tuple{"angry", "angry"});
            }
        }
    return t;
}

Negotiation fdm_base(const std::vector<Symbol>& times) {
    check_times(times);
    std::vector<Symbol> states = times;
    states.push_back("angry");

    Negotiation n;
    n.add_agent("D", states);
    n.add_agent("F", states);
    n.add_agent("M", states);
    n.initial = "n0";
    n.final = "nf";

    n.add_atom("n0", {"D", "F", "M"}, {"st"});
    n.add_atom("nFD", {"D", "F"}, {"yes", "no", "am"});
    n.add_atom("nDM", {"D", "M"}, {"yes", "no"});
    n.add_atom("nf", {"D", "F", "M"}, {"r"});

    n.set_delta("n0", "st", identity_transformer(n, {"D", "F", "M"}));
    n.set_delta("nFD", "yes", bargain({"D", "F"}, times, true));
    n.set_delta("nFD", "no", bargain({"D", "F"}, times, false));
    n.set_delta("nFD", "am", identity_transformer(n, {"D", "F"}));
    n.set_delta("nDM", "yes", bargain({"D", "M"}, times, true));
    n.set_delta("nDM", "no", bargain({"D", "M"}, times, false));
    n.set_delta("nf", "r", identity_transformer(n, {"D", "F", "M"}));

    n.set_transition("n0", "D", "st", {"nFD"});
    n.set_transition("n0", "F", "st", {"nFD"});
    n.set_transition("n0", "M", "st", {"nDM", "nf"});
    n.set_transition("nFD", "D", "yes", {"nf"});
    n.set_transition("nFD", "D", "no", {"nf"});
    n.set_transition("nFD", "D", "am", {"nDM"});
    n.set_transition("nFD", "F", "yes", {"nf"});
    n.set_transition("nFD", "F", "no", {"nf"});
    n.set_transition("nFD", "F", "am", {"nf"});
    n.set_transition("nDM", "D", "yes", {"nf"});
    n.set_transition("nDM", "D", "no", {"nf"});
    n.set_transition("nDM", "M", "yes", {"nf"});
    n.set_transition("nDM", "M", "no", {"nf"});
    n.set_transition("nf", "D", "r", {});
    n.set_transition("nf", "F", "r", {});
    n.set_transition("nf", "M", "r", {});
    return n;
}

} // namespace

Negotiation gen_fdm(const std::vector<Symbol>& times) { return fdm_base(times); }

Negotiation gen_fdm_unsound(const std::vector<Symbol>& times) {
    Negotiation n = fdm_base(times);
    n.set_transition("n0", "M", "st", {"nDM"});
    return n;
}

Negotiation gen_pingpong(const std::vector<Symbol>& times) {
    Negotiation n = fdm_base(times);

    Atom& ndm = n.atoms.at("nDM");
    ndm.outcomes.push_back("af");
    n.set_delta("nDM", "af", identity_transformer(n, {"D", "M"}));

    n.add_atom("nD", {"D"}, {"c", "gu"});
    n.set_delta("nD", "c", identity_transformer(n, {"D"}));
    n.set_delta("nD", "gu", identity_transformer(n, {"D"}));

    // After asking mother, Father waits either for another round or the end.
    n.set_transition("nFD", "F", "am", {"nFD", "nf"});
    n.set_transition("nDM", "D", "af", {"nD"});
    n.set_transition("nDM", "M", "af", {"nDM", "nf"});
    n.set_transition("nD", "D", "c", {"nFD"});
    n.set_transition("nD", "D", "gu", {"nf"});
    return n;
}

Negotiation gen_sat(const CnfFormula& f) {
    if (f.clauses.empty())
        throw PreconditionError("gen_sat requires at least one clause");
    for (const auto& c : f.clauses) {
        if (c.literals.empty() || c.literals.size() > 3)
            throw PreconditionError("gen_sat requires clauses with 1..3 literals");
        if (is_tautology(c))
            throw PreconditionError("gen_sat requires non-tautological clauses");
        for (const auto& lit : c.literals)
            if (lit.var == 0 || lit.var > f.num_vars)
                throw PreconditionError("gen_sat: literal variable out of range");
    }

    Negotiation n;
    auto var_agent = [](unsigned i) { return "x" + std::to_string(i); };
    auto clause_atom = [](std::size_t j) { return "false_" + std::to_string(j + 1); };

    n.add_agent("J", {"s"});
    for (unsigned i = 1; i <= f.num_vars; ++i) n.add_agent(var_agent(i), {"s"});
    n.initial = "n0";
    n.final = "nf";

    std::vector<Symbol> everyone = n.agent_names();
    n.add_atom("n0", everyone, {"st"});
    n.set_delta("n0", "st", identity_transformer(n, everyone));
    n.add_atom("nf", everyone, {"done"});
    n.set_delta("nf", "done", identity_transformer(n, everyone));
    for (const auto& a : everyone) n.set_transition("nf", a, "done", {});

    for (unsigned i = 1; i <= f.num_vars; ++i) {
        Symbol id = "set_" + var_agent(i);
        n.add_atom(id, {var_agent(i)}, {"true", "false"});
        n.set_delta(id, "true", identity_transformer(n, {var_agent(i)}));
        n.set_delta(id, "false", identity_transformer(n, {var_agent(i)}));
        n.set_transition("n0", var_agent(i), "st", {id});
    }

    std::set<Symbol> all_clause_atoms;
    for (std::size_t j = 0; j < f.clauses.size(); ++j) {
        std::vector<Symbol> parties{"J"};
        for (const auto& lit : f.clauses[j].literals) parties.push_back(var_agent(lit.var));
        std::sort(parties.begin(), parties.end());
        parties.erase(std::unique(parties.begin(), parties.end()), parties.end());
        Symbol id = clause_atom(j);
        n.add_atom(id, parties, {"false"});
        n.set_delta(id, "false", identity_transformer(n, parties));
        for (const auto& p : parties) n.set_transition(id, p, "false", {"nf"});
        all_clause_atoms.insert(id);
    }
    n.set_transition("n0", "J", "st", all_clause_atoms);

    // After choosing a value, the agent is ready for exactly the clause
    // atoms its choice fails to satisfy, plus the final atom.
    for (unsigned i = 1; i <= f.num_vars; ++i) {
        for (bool value : {true, false}) {
            std::set<Symbol> targets{"nf"};
            for (std::size_t j = 0; j < f.clauses.size(); ++j) {
                const auto& lits = f.clauses[j].literals;
                bool involves = lits.count(CnfLiteral{i, true}) || lits.count(CnfLiteral{i, false});
                bool satisfies = lits.count(CnfLiteral{i, value});
                if (involves && !satisfies) targets.insert(clause_atom(j));
            }
            n.set_transition("set_" + var_agent(i), var_agent(i),
                             value ? "true" : "false", targets);
        }
    }
    return n;
}

Negotiation gen_random_sdan(std::uint64_t seed, std::size_t num_atoms,
                            std::size_t num_agents, std::size_t outcomes_per_atom,
                            std::size_t states_per_agent) {
    if (num_atoms < 1 || num_atoms > 99 || num_agents < 1 || num_agents > 26 ||
        outcomes_per_atom < 1 || states_per_agent < 1)
        throw PreconditionError("gen_random_sdan: parameter out of range");

    std::mt19937_64 rng(seed);
    auto bounded = [&rng](std::size_t n) { return static_cast<std::size_t>(rng() % n); };

    for (int attempt = 0; attempt < 100; ++attempt) {
        Negotiation n;
        std::vector<Symbol> states;
        for (std::size_t s = 0; s < states_per_agent; ++s)
            states.push_back("s" + std::to_string(s));
        std::vector<Symbol> agents;
        for (std::size_t a = 0; a < num_agents; ++a)
            agents.push_back(Symbol(1, static_cast<char>('a' + a)));
        for (const auto& a : agents) n.add_agent(a, states);

        auto atom_name = [](std::size_t i) {
            std::string s = std::to_string(i);
            return "n" + std::string(s.size() < 2 ? 2 - s.size() : 0, '0') + s;
        };
        std::vector<Symbol> outcome_names;
        for (std::size_t r = 0; r < outcomes_per_atom; ++r)
            outcome_names.push_back("r" + std::to_string(r));

        n.initial = atom_name(0);
        n.final = atom_name(num_atoms - 1);
        for (std::size_t i = 0; i < num_atoms; ++i)
            n.add_atom(atom_name(i), agents, outcome_names);

        // One shared successor per (atom, outcome). A spanning assignment
        // makes every atom reachable; the rest is wired to random later
        // atoms, so every run strictly advances and ends at the final atom.
        std::vector<std::vector<std::size_t>> target(num_atoms);
        for (std::size_t i = 0; i + 1 < num_atoms; ++i)
            target[i].assign(outcomes_per_atom, num_atoms); // unassigned
        for (std::size_t t = 1; t < num_atoms; ++t) {
            std::vector<std::pair<std::size_t, std::size_t>> slots;
            for (std::size_t i = 0; i < t; ++i)
                for (std::size_t r = 0; r < outcomes_per_atom; ++r)
                    if (i + 1 < num_atoms && target[i][r] == num_atoms)
                        slots.emplace_back(i, r);
            auto [i, r] = slots[bounded(slots.size())];
            target[i][r] = t;
        }
        for (std::size_t i = 0; i + 1 < num_atoms; ++i)
            for (std::size_t r = 0; r < outcomes_per_atom; ++r)
                if (target[i][r] == num_atoms)
                    target[i][r] = i + 1 + bounded(num_atoms - i - 1);

        for (std::size_t i = 0; i < num_atoms; ++i)
            for (std::size_t r = 0; r < outcomes_per_atom; ++r)
                for (const auto& a : agents) {
                    std::set<Symbol> tg;
                    if (i + 1 < num_atoms) tg.insert(atom_name(target[i][r]));
                    n.set_transition(atom_name(i), a, outcome_names[r], std::move(tg));
                }

        // Random left-total transformers: one or two successors per input.
        std::vector<Tuple> inputs =
            enumerate_product(std::vector<std::vector<Symbol>>(num_agents, states));
        for (std::size_t i = 0; i < num_atoms; ++i)
            for (const auto& r : outcome_names) {
                Transformer t;
                t.parties = agents;
                for (const auto& in : inputs) {
                    std::size_t fanout = 1 + bounded(2);
                    for (std::size_t k = 0; k < fanout; ++k) {
                        Tuple out;
                        for (std::size_t a = 0; a < num_agents; ++a)
                            out.push_back(states[bounded(states.size())]);
                        t.pairs.emplace(in, std::move(out));
                    }
                }
                n.set_delta(atom_name(i), r, std::move(t));
            }

        if (!validate(n).empty()) continue;
        Classification c = classify(n);
        if (!c.deterministic || !c.acyclic) continue;
        if (!check_soundness(n).sound) continue;
        return n;
    }
    throw NegotiationError("gen_random_sdan: no sound instance after 100 attempts");
}

} // namespace neg

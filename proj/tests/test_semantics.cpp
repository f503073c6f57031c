#include "neg/analysis.hpp"
#include "neg/errors.hpp"
#include "neg/generators.hpp"
#include "neg/io.hpp"
#include "neg/semantics.hpp"

#include <doctest.h>

#include "corpus.hpp"

using namespace neg;

TEST_CASE("initial marking maps every agent to the initial atom") {
    Negotiation n = gen_fdm({"8", "9", "10"});
    Marking x0 = initial_marking(n);
    for (const auto& ag : {"D", "F", "M"})
        CHECK(x0.ready.at(ag) == std::set<Symbol>{"n0"});

    Negotiation single = corpus::full_corpus()[0].n; // single_one
    CHECK(initial_marking(single).ready.at("a") == std::set<Symbol>{"n0"});
}

TEST_CASE("enabled atoms at the fdm and ping-pong markings") {
    Negotiation n = gen_fdm({"8"});
    CHECK(enabled(initial_marking(n), n) == std::vector<Symbol>{"n0"});
    CHECK(enabled(final_marking(n), n).empty());

    // the marked ping-pong marking: F ready for {nFD, nf}, D for {nFD},
    // M for {nDM, nf}
    Negotiation p = gen_pingpong({"8"});
    Marking m;
    m.ready["F"] = {"nFD", "nf"};
    m.ready["D"] = {"nFD"};
    m.ready["M"] = {"nDM", "nf"};
    CHECK(enabled(m, p) == std::vector<Symbol>{"nFD"});
    // and that marking is reachable
    Marking reached = run(p, {{"n0", "st"}, {"nFD", "am"}, {"nDM", "af"}, {"nD", "c"}});
    CHECK(reached == m);
}

TEST_CASE("step applies the update rule") {
    Negotiation n = gen_fdm({"8"});
    Marking next = step(initial_marking(n), "n0", "st", n);
    CHECK(next.ready.at("F") == std::set<Symbol>{"nFD"});
    CHECK(next.ready.at("D") == std::set<Symbol>{"nFD"});
    CHECK(next.ready.at("M") == std::set<Symbol>{"nDM", "nf"});

    SUBCASE("stepping the final atom empties every party") {
        Marking before;
        before.ready["D"] = before.ready["F"] = before.ready["M"] = {"nf"};
        CHECK(step(before, "nf", "r", n) == final_marking(n));
    }
    SUBCASE("stepping a non-enabled atom fails") {
        CHECK_THROWS_WITH_AS(step(initial_marking(n), "nFD", "yes", n),
                             "atom nFD is not enabled", PreconditionError);
    }
    SUBCASE("unknown outcome fails") {
        CHECK_THROWS_AS(step(initial_marking(n), "n0", "nope", n), PreconditionError);
    }
}

TEST_CASE("deadlock detection") {
    Negotiation n = gen_fdm({"8"});
    CHECK(!is_deadlock(final_marking(n), n));
    CHECK(!is_deadlock(initial_marking(n), n));

    Negotiation bad = gen_fdm_unsound({"8"});
    Marking stuck = run(bad, {{"n0", "st"}, {"nFD", "yes"}});
    CHECK(is_deadlock(stuck, bad));
}

TEST_CASE("run replays sequences and reports the failing index") {
    Negotiation n = gen_fdm({"8"});
    CHECK(run(n, {}) == initial_marking(n));
    CHECK(run(n, {{"n0", "st"}, {"nFD", "am"}, {"nDM", "yes"}, {"nf", "r"}}) ==
          final_marking(n));
    try {
        run(n, {{"nFD", "yes"}});
        FAIL("expected StepError");
    } catch (const StepError& e) {
        CHECK(e.index == 0);
    }
    try {
        run(n, {{"n0", "st"}, {"n0", "st"}});
        FAIL("expected StepError");
    } catch (const StepError& e) {
        CHECK(e.index == 1);
    }
}

TEST_CASE("reach of a single-atom negotiation") {
    ReachabilityGraph g = reach(corpus::full_corpus()[0].n); // single_one
    CHECK(g.vertices.size() == 2);
    CHECK(g.edges.size() == 1);
    REQUIRE(g.final.has_value());
    CHECK(*g.final == 1);
}

TEST_CASE("reach of fdm contains the final marking and no deadlock") {
    Negotiation n = gen_fdm({"8", "9", "10"});
    ReachabilityGraph g = reach(n);
    REQUIRE(g.final.has_value());
    for (const auto& m : g.vertices) CHECK(!is_deadlock(m, n));
}

TEST_CASE("reach of the ping-pong negotiation closes a cycle") {
    Negotiation p = gen_pingpong({"8"});
    ReachabilityGraph g = reach(p);
    REQUIRE(g.final.has_value());
    // some edge returns to an already-visited vertex with smaller id
    bool cycle_edge = false;
    for (const auto& e : g.edges)
        if (e.to <= e.from) cycle_edge = true;
    CHECK(cycle_edge);
}

TEST_CASE("reach honors the exploration budget") {
    Negotiation n = gen_fdm({"8", "9", "10"});
    CHECK_THROWS_AS(reach(n, ExploreBudget{4}), BudgetError);
}

TEST_CASE("reach is deterministic") {
    for (const auto& name : {"pingpong_2", "sdan_42"})
        for (const auto& inst : corpus::full_corpus())
            if (inst.name == name) {
                ReachabilityGraph g1 = reach(inst.n);
                ReachabilityGraph g2 = reach(inst.n);
                CHECK(reach_to_text(g1, inst.n) == reach_to_text(g2, inst.n));
            }
}

TEST_CASE("token invariant: reachable markings are final or everywhere non-empty") {
    for (const auto& inst : corpus::full_corpus()) {
        if (inst.n.atoms.size() > 8) continue;
        for (const auto& m : reach(inst.n).vertices) {
            bool all_empty = true, any_empty = false;
            for (const auto& [_, atoms] : m.ready) {
                all_empty = all_empty && atoms.empty();
                any_empty = any_empty || atoms.empty();
            }
            CHECK_MESSAGE((all_empty || !any_empty), inst.name);
        }
    }
}

TEST_CASE("the final marking has no outgoing edges and only final-atom edges reach it") {
    for (const auto& inst : corpus::full_corpus()) {
        ReachabilityGraph g = reach(inst.n);
        if (!g.final) continue;
        CHECK(g.out[*g.final].empty());
        for (const auto& e : g.edges)
            if (e.to == *g.final) CHECK_MESSAGE(e.atom == inst.n.final, inst.name);
    }
}

TEST_CASE("acyclic negotiations never repeat an atom in a sequence") {
    for (const auto& inst : corpus::full_corpus()) {
        if (!is_acyclic(inst.n) || inst.n.atoms.size() > 6) continue;
        for (const auto& seq : enumerate_sequences(inst.n, inst.n.atoms.size() + 1)) {
            CHECK(seq.size() <= inst.n.atoms.size());
            std::set<Symbol> seen;
            for (const auto& [atom, _] : seq) CHECK_MESSAGE(seen.insert(atom).second, inst.name);
        }
    }
}

TEST_CASE("occurrence language equality is reflexive and detects change") {
    Negotiation n = gen_fdm({"8"});
    ReachabilityGraph g = reach(n);
    CHECK(same_occurrence_language(g, g));
    Negotiation other = gen_fdm_unsound({"8"});
    CHECK(!same_occurrence_language(g, reach(other)));
}

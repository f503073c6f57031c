#include "neg/analysis.hpp"
#include "neg/generators.hpp"

#include <doctest.h>

#include "corpus.hpp"
#include "oracles.hpp"

using namespace neg;

TEST_CASE("fdm is sound, unsound variant carries the expected witness") {
    CHECK(check_soundness(gen_fdm({"8", "9", "10"})).sound);
    CHECK(check_soundness(gen_pingpong({"8", "9", "10"})).sound);

    SoundnessVerdict v = check_soundness(gen_fdm_unsound({"8", "9", "10"}));
    CHECK(!v.sound);
    REQUIRE(v.witness.has_value());
    std::vector<std::pair<Symbol, Symbol>> expected{{"n0", "st"}, {"nFD", "yes"}};
    CHECK(*v.witness == expected);
}

TEST_CASE("soundness reports atoms that never occur") {
    for (const auto& inst : corpus::hand_instances())
        if (inst.name == "unsound_wd") {
            SoundnessVerdict v = check_soundness(inst.n);
            CHECK(!v.sound);
            CHECK(v.unreached_atoms == std::set<Symbol>{"m"});
            CHECK(!v.witness.has_value());
        }
}

TEST_CASE("livelock without deadlock is unsound with a short witness") {
    for (const auto& inst : corpus::hand_instances())
        if (inst.name == "livelock") {
            SoundnessVerdict v = check_soundness(inst.n);
            CHECK(!v.sound);
            // the final marking is unreachable from the start, so the
            // shortest witness is the empty sequence into x0 itself
            REQUIRE(v.witness.has_value());
            CHECK(v.witness->empty());
        }
}

TEST_CASE("check_soundness agrees with the naive oracle on the whole corpus") {
    for (const auto& inst : corpus::full_corpus()) {
        if (inst.n.atoms.size() > 8) continue;
        CHECK_MESSAGE(check_soundness(inst.n).sound == oracles::naive_sound(inst.n),
                      inst.name);
    }
}

TEST_CASE("if sound, every vertex lies on a path from x0 to xf") {
    // already the decision procedure's contract; spot-check via the witness
    for (const auto& inst : corpus::full_corpus()) {
        SoundnessVerdict v = check_soundness(inst.n);
        if (v.sound) CHECK(!v.witness.has_value());
    }
}

TEST_CASE("atom graph of fdm") {
    auto g = atom_graph(gen_fdm({"8"}));
    CHECK(g.at("n0") == std::set<Symbol>{"nFD", "nDM", "nf"});
    CHECK(g.at("nFD") == std::set<Symbol>{"nDM", "nf"});
    CHECK(g.at("nDM") == std::set<Symbol>{"nf"});
    CHECK(g.at("nf").empty());

    auto single = atom_graph(corpus::hand_instances()[0].n);
    CHECK(single.size() == 1);
    CHECK(single.begin()->second.empty());
}

TEST_CASE("cycle detection") {
    CHECK(is_acyclic(gen_fdm({"8"})));
    CHECK(!is_acyclic(gen_pingpong({"8"})));
    auto g = atom_graph(gen_pingpong({"8"}));
    CHECK(g.at("nFD").count("nDM"));
    CHECK(g.at("nDM").count("nD"));
    CHECK(g.at("nD").count("nFD"));
    for (const auto& inst : corpus::hand_instances()) {
        if (inst.name == "single_one") CHECK(is_acyclic(inst.n));
        if (inst.name == "self_loop") CHECK(!is_acyclic(inst.n));
    }
}

TEST_CASE("classification of the fdm family") {
    Classification fdm = classify(gen_fdm({"8", "9", "10"}));
    CHECK(fdm.acyclic);
    CHECK(fdm.deterministic_agents == std::set<Symbol>{"D", "F"});
    CHECK(!fdm.deterministic);
    CHECK(fdm.weakly_deterministic);

    Classification pp = classify(gen_pingpong({"8", "9", "10"}));
    CHECK(!pp.acyclic);
    CHECK(pp.deterministic_agents == std::set<Symbol>{"D"});
    CHECK(!pp.deterministic);
    CHECK(pp.weakly_deterministic);
}

TEST_CASE("deterministic implies weakly deterministic across the corpus") {
    for (const auto& inst : corpus::full_corpus()) {
        Classification c = classify(inst.n);
        if (c.deterministic) CHECK_MESSAGE(c.weakly_deterministic, inst.name);
        CHECK(c.deterministic == (c.deterministic_agents.size() == inst.n.agents.size()));
    }
}

TEST_CASE("a proper hyperarc without a shared deterministic party breaks weak determinism") {
    for (const auto& inst : corpus::hand_instances())
        if (inst.name == "not_weakly_det") {
            Classification c = classify(inst.n);
            CHECK(!c.weakly_deterministic);
            CHECK(!c.deterministic);
        }
}

#include "neg/errors.hpp"
#include "neg/generators.hpp"
#include "neg/model.hpp"

#include <doctest.h>

#include "corpus.hpp"

#include <algorithm>

using namespace neg;

TEST_CASE("validate accepts the fdm instance") {
    CHECK(validate(gen_fdm({"8", "9", "10"})).empty());
}

TEST_CASE("validate flags an agent missing from the final atom") {
    Negotiation n = gen_fdm({"8"});
    Atom& nf = n.atoms.at("nf");
    nf.parties = {"D", "F"};
    nf.delta.clear();
    Transformer t;
    t.parties = {"D", "F"};
    for (const auto& x : std::vector<Symbol>{"8", "angry"})
        for (const auto& y : std::vector<Symbol>{"8", "angry"})
            t.pairs.emplace(Tuple{x, y}, Tuple{x, y});
    nf.delta["r"] = t;
    n.transitions.erase(TransitionKey{"nf", "M", "r"});

    auto v = validate(n);
    REQUIRE(!v.empty());
    CHECK(std::any_of(v.begin(), v.end(), [](const std::string& msg) {
        return msg.find("agent M not party of final atom") != std::string::npos;
    }));
}

TEST_CASE("validate flags an empty transition set on a non-final atom") {
    Negotiation n = gen_fdm({"8"});
    n.set_transition("nFD", "D", "am", {});
    auto v = validate(n);
    REQUIRE(v.size() == 1);
    CHECK(v[0].find("empty transition set on non-final atom") != std::string::npos);
}

TEST_CASE("validate flags a transformer that is not left-total") {
    Negotiation n = gen_fdm({"8"});
    Transformer& t = n.atoms.at("nFD").delta.at("yes");
    t.pairs.erase(t.pairs.begin());
    auto v = validate(n);
    REQUIRE(!v.empty());
    CHECK(v[0].find("not left-total") != std::string::npos);
}

TEST_CASE("validate flags unknown targets and missing ports") {
    Negotiation n = gen_fdm({"8"});
    SUBCASE("unknown target atom") {
        n.set_transition("n0", "D", "st", {"ghost"});
        auto v = validate(n);
        REQUIRE(!v.empty());
        CHECK(v[0].find("unknown target atom") != std::string::npos);
    }
    SUBCASE("target without a port for the agent") {
        // M is not a party of nFD
        n.set_transition("n0", "M", "st", {"nFD"});
        auto v = validate(n);
        REQUIRE(!v.empty());
        CHECK(v[0].find("not a party of target") != std::string::npos);
    }
}

TEST_CASE("validate flags duplicate states and outcomes") {
    Negotiation n = corpus::chain(2);
    SUBCASE("duplicate state") {
        n.agents[0].states.push_back("0");
        CHECK(!validate(n).empty());
    }
    SUBCASE("duplicate outcome") {
        n.atoms.at("c00").outcomes.push_back("r");
        CHECK(!validate(n).empty());
    }
}

TEST_CASE("every corpus instance passes validate") {
    for (const auto& inst : corpus::full_corpus())
        CHECK_MESSAGE(validate(inst.n).empty(), inst.name);
}

TEST_CASE("local transformer algebra") {
    Negotiation n = corpus::chain(2);
    Transformer id = identity_transformer(n, {"a"});
    Transformer swap = corpus::swap_party(n, {"a"}, "a");

    CHECK(is_identity(n, id));
    CHECK(!is_identity(n, swap));
    CHECK(compose_local(swap, swap) == id);
    CHECK(compose_local(id, swap) == swap);

    Transformer both = unite_local(id, swap);
    CHECK(both.pairs.size() == 4);
    CHECK(unite_local(both, both) == both);
}

TEST_CASE("extend_local fixes the added coordinates") {
    Negotiation n;
    n.add_agent("a", {"0", "1"});
    n.add_agent("b", {"x", "y"});
    n.initial = n.final = "n0";
    n.add_atom("n0", {"a", "b"}, {"r"});
    n.set_delta("n0", "r", identity_transformer(n, {"a", "b"}));
    n.set_transition("n0", "a", "r", {});
    n.set_transition("n0", "b", "r", {});

    Transformer swap_a;
    swap_a.parties = {"a"};
    swap_a.pairs.emplace(Tuple{"0"}, Tuple{"1"});
    swap_a.pairs.emplace(Tuple{"1"}, Tuple{"0"});

    Transformer wide = extend_local(n, swap_a, {"a", "b"});
    CHECK(wide.pairs.size() == 4);
    CHECK(wide.pairs.count({Tuple{"0", "x"}, Tuple{"1", "x"}}) == 1);
    CHECK(wide.pairs.count({Tuple{"1", "y"}, Tuple{"0", "y"}}) == 1);
    CHECK(wide.pairs.count({Tuple{"0", "x"}, Tuple{"1", "y"}}) == 0);
}

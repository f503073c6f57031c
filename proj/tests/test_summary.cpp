#include "neg/errors.hpp"
#include "neg/generators.hpp"
#include "neg/summary.hpp"

#include <doctest.h>

#include "corpus.hpp"
#include "oracles.hpp"

using namespace neg;

namespace {

const Negotiation& by_name(const std::string& name) {
    for (const auto& inst : corpus::full_corpus())
        if (inst.name == name) return inst.n;
    throw std::runtime_error("missing corpus instance " + name);
}

} // namespace

TEST_CASE("summary of a single atom is its lifted transformer") {
    const Negotiation& n = by_name("single_two");
    Summary s = summarize_statespace(n);
    REQUIRE(s.verdict.sound);
    REQUIRE(s.relations.size() == 2);
    auto domain = std::make_shared<const Domain>(Domain::of(n));
    CHECK(s.relations.at("r") == lift(n, n.atom("n0").delta.at("r"), domain));
    CHECK(s.relations.at("s") == lift(n, n.atom("n0").delta.at("s"), domain));
}

TEST_CASE("two parallel paths sum to the union of their compositions") {
    const Negotiation& n = by_name("two_paths");
    Summary s = summarize_statespace(n);
    REQUIRE(s.verdict.sound);
    const GlobalRelation& fin = s.relations.at("fin");
    // swap-a union swap-b over two binary agents: eight pairs
    CHECK(fin.pair_count() == 8);
    for (const auto& x : {"0", "1"})
        for (const auto& y : {"0", "1"}) {
            Tuple from{x, y};
            CHECK(fin.contains(from, {x == Symbol("0") ? "1" : "0", y}));
            CHECK(fin.contains(from, {x, y == Symbol("0") ? "1" : "0"}));
            CHECK(!fin.contains(from, from));
        }
}

TEST_CASE("statespace summary equals brute force on sound acyclic corpus instances") {
    for (const auto& inst : corpus::full_corpus()) {
        if (!is_acyclic(inst.n)) continue;
        Summary a = summarize_statespace(inst.n);
        if (!a.verdict.sound) {
            CHECK(a.relations.empty());
            continue;
        }
        Summary b = brute_force_summary(inst.n);
        CHECK_MESSAGE(a.relations == b.relations, inst.name);
    }
}

TEST_CASE("cyclic summaries equal the Kleene iteration oracle") {
    for (const auto& name : {"self_loop", "pingpong_1", "pingpong_2"}) {
        const Negotiation& n = by_name(name);
        Summary s = summarize_statespace(n);
        REQUIRE(s.verdict.sound);
        auto oracle = oracles::kleene_summary(n);
        CHECK_MESSAGE(s.relations == oracle, name);
    }
}

TEST_CASE("elimination order does not change the summary") {
    int checked = 0;
    for (const auto& inst : corpus::full_corpus()) {
        if (inst.name.rfind("sdan_", 0) == 0 && ++checked > 12) continue;
        Summary base = summarize_statespace(inst.n);
        if (!base.verdict.sound) continue;
        for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
            SummarizeOptions opts;
            opts.elimination_order_seed = seed;
            CHECK_MESSAGE(summarize_statespace(inst.n, opts).relations == base.relations,
                          inst.name);
        }
    }
}

TEST_CASE("brute force requires acyclic input") {
    CHECK_THROWS_AS(brute_force_summary(gen_pingpong({"8"})), PreconditionError);
}

TEST_CASE("unsound inputs yield verdict-only summaries") {
    Summary s = summarize_statespace(gen_fdm_unsound({"8"}));
    CHECK(!s.verdict.sound);
    CHECK(s.relations.empty());
    Summary b = brute_force_summary(gen_fdm_unsound({"8"}));
    CHECK(!b.verdict.sound);
    CHECK(b.relations.empty());
}

TEST_CASE("equivalence of the fdm family") {
    CHECK(equivalent(gen_fdm({"8", "9"}), gen_fdm({"8", "9"})).equivalent);

    SUBCASE("all unsound negotiations are equivalent") {
        Negotiation u1 = gen_fdm_unsound({"8", "9"});
        // a second unsound variant over the same agents and states
        Negotiation u2 = gen_fdm({"8", "9"});
        u2.set_transition("n0", "M", "st", {"nDM"});
        u2.set_transition("nFD", "D", "am", {"nf"});
        REQUIRE(!check_soundness(u2).sound);
        EquivalenceResult e = equivalent(u1, u2);
        CHECK(e.equivalent);
        CHECK(e.reason == "both unsound");
    }

    SUBCASE("sound and unsound are inequivalent") {
        CHECK(!equivalent(gen_fdm({"8", "9"}), gen_fdm_unsound({"8", "9"})).equivalent);
    }

    SUBCASE("changing a transformer changes the summary") {
        Negotiation other = gen_fdm({"8", "9"});
        other.set_delta("nFD", "no", identity_transformer(other, {"D", "F"}));
        EquivalenceResult e = equivalent(gen_fdm({"8", "9"}), other);
        CHECK(!e.equivalent);
        CHECK(e.reason.find("summary differs") != std::string::npos);
    }

    SUBCASE("agent mismatch is an error") {
        CHECK_THROWS_AS(equivalent(gen_fdm({"8"}), gen_fdm({"8", "9"})),
                        PreconditionError);
    }
}

TEST_CASE("equivalence behaves like an equivalence relation on sampled triples") {
    const Negotiation& a = by_name("merge_same");
    const Negotiation& b = by_name("merge_disjoint");
    Negotiation c = a;

    CHECK(equivalent(a, a).equivalent);
    EquivalenceResult ab = equivalent(a, b);
    EquivalenceResult ba = equivalent(b, a);
    CHECK(ab.equivalent == ba.equivalent);
    CHECK(equivalent(a, c).equivalent);
    if (ab.equivalent) CHECK(equivalent(b, c).equivalent);
}

#include "neg/analysis.hpp"
#include "neg/generators.hpp"
#include "neg/io.hpp"

#include <doctest.h>

#include "corpus.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

// End-to-end checks of the command-line tool built by this project.

namespace {

namespace fs = std::filesystem;

struct CliRun {
    int exit_code;
    std::string output;
};

const fs::path& work_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "neg-cli-tests";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

CliRun run_cli(const std::string& args) {
    fs::path out = work_dir() / "cli-output.txt";
    std::string cmd = std::string(NEG_CLI_PATH) + " " + args + " > " + out.string() + " 2>&1";
    int status = std::system(cmd.c_str());
    std::ifstream in(out);
    std::ostringstream os;
    os << in.rdbuf();
    int code = -1;
    if (WIFEXITED(status)) code = WEXITSTATUS(status);
    return {code, os.str()};
}

fs::path write(const std::string& name, const std::string& content) {
    fs::path p = work_dir() / name;
    std::ofstream(p) << content;
    return p;
}

} // namespace

TEST_CASE("check: sound and unsound answers both exit 0") {
    auto fdm = write("fdm.neg", neg::serialize(neg::gen_fdm({"8", "9", "10"})));
    CliRun sound = run_cli("check " + fdm.string());
    CHECK(sound.exit_code == 0);
    CHECK(sound.output.find("sound: true") != std::string::npos);

    auto bad = write("fdm_unsound.neg", neg::serialize(neg::gen_fdm_unsound({"8", "9", "10"})));
    CliRun unsound = run_cli("check " + bad.string());
    CHECK(unsound.exit_code == 0);
    CHECK(unsound.output.find("sound: false") != std::string::npos);
    CHECK(unsound.output.find("witness: (n0,st) (nFD,yes)") != std::string::npos);

    CliRun machine = run_cli("check --format machine " + bad.string());
    CHECK(machine.exit_code == 0);
    CHECK(machine.output.find("\"kind\": \"verdict\"") != std::string::npos);
}

TEST_CASE("check: parse failures exit 2, budget exhaustion exits 3") {
    auto garbage = write("garbage.neg", "this is not a document");
    CliRun r = run_cli("check " + garbage.string());
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("syntax error") != std::string::npos);

    auto fdm = write("fdm3.neg", neg::serialize(neg::gen_fdm({"8", "9", "10"})));
    CliRun b = run_cli("check --budget 3 " + fdm.string());
    CHECK(b.exit_code == 3);
}

TEST_CASE("check: graph exports") {
    auto fdm = write("fdm_g.neg", neg::serialize(neg::gen_fdm({"8"})));
    fs::path dot = work_dir() / "g.dot";
    fs::path txt = work_dir() / "g.txt";
    CliRun r = run_cli("check " + fdm.string() + " --dot " + dot.string() + " --graph " +
                       txt.string());
    CHECK(r.exit_code == 0);
    std::ostringstream dots, txts;
    dots << std::ifstream(dot).rdbuf();
    txts << std::ifstream(txt).rdbuf();
    CHECK(dots.str().find("digraph reachability") == 0);
    CHECK(txts.str().find("reachability-graph") == 0);
}

TEST_CASE("classify") {
    auto pp = write("pp.neg", neg::serialize(neg::gen_pingpong({"8"})));
    CliRun r = run_cli("classify " + pp.string());
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("acyclic: false") != std::string::npos);
    CHECK(r.output.find("weakly deterministic: true") != std::string::npos);
    CHECK(r.output.find("deterministic agents: D") != std::string::npos);
}

TEST_CASE("summarize: both methods agree on fdm") {
    auto fdm = write("fdm_s.neg", neg::serialize(neg::gen_fdm({"8", "9"})));
    CliRun r = run_cli("summarize --method both " + fdm.string());
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("PASS") != std::string::npos);
}

TEST_CASE("summarize: reduce path answers for both sound and unsound inputs") {
    auto sdan = write("sdan_sum.neg", neg::serialize(neg::gen_random_sdan(5, 5, 2, 2, 2)));
    CliRun r = run_cli("summarize --method reduce " + sdan.string());
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("sound: true") != std::string::npos);
    CHECK(r.output.find("summary '") != std::string::npos);

    auto bad = write("bad_sum.neg", neg::serialize(neg::gen_fdm_unsound({"8"})));
    CliRun u = run_cli("summarize --method reduce " + bad.string());
    CHECK(u.exit_code == 0);
    CHECK(u.output.find("sound: false") != std::string::npos);
}

TEST_CASE("summarize: reduce refuses cyclic inputs with a hint") {
    auto pp = write("pp_s.neg", neg::serialize(neg::gen_pingpong({"8"})));
    CliRun r = run_cli("summarize --method reduce " + pp.string());
    CHECK(r.exit_code == 4);
    CHECK(r.output.find("statespace") != std::string::npos);

    CliRun s = run_cli("summarize --method statespace " + pp.string());
    CHECK(s.exit_code == 0);
    CHECK(s.output.find("summary 'r'") != std::string::npos);
}

TEST_CASE("reduce writes result, trace, and bounds; replay reproduces the result") {
    auto sdan = write("sdan.neg",
                      neg::serialize(neg::gen_random_sdan(7, 6, 2, 2, 2)));
    fs::path out = work_dir() / "reduced.neg";
    fs::path trace = work_dir() / "run.trace";
    CliRun r = run_cli("reduce " + sdan.string() + " -o " + out.string() + " --trace " +
                       trace.string());
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("atoms: 6 -> 1") != std::string::npos);
    CHECK(r.output.find("bound Out") != std::string::npos);

    fs::path replayed = work_dir() / "replayed.neg";
    CliRun rep = run_cli("replay " + sdan.string() + " " + trace.string() + " -o " +
                         replayed.string());
    CHECK(rep.exit_code == 0);
    std::ostringstream a, b;
    a << std::ifstream(out).rdbuf();
    b << std::ifstream(replayed).rdbuf();
    CHECK(a.str() == b.str());

    SUBCASE("replay rejects a mismatched source") {
        auto other = write("other.neg", neg::serialize(neg::gen_random_sdan(8, 6, 2, 2, 2)));
        CliRun bad = run_cli("replay " + other.string() + " " + trace.string());
        CHECK(bad.exit_code == 4);
    }
}

TEST_CASE("reduce reports unsound fixpoints without failing") {
    auto bad = write("wd_unsound.neg", neg::serialize(neg::gen_fdm_unsound({"8"})));
    CliRun r = run_cli("reduce " + bad.string());
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("sound: false") != std::string::npos);
}

TEST_CASE("equiv") {
    auto a = write("eq_a.neg", neg::serialize(neg::gen_fdm({"8"})));
    auto b = write("eq_b.neg", neg::serialize(neg::gen_fdm_unsound({"8"})));
    CliRun r = run_cli("equiv " + a.string() + " " + b.string());
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("equivalent: false") != std::string::npos);

    auto c = write("eq_c.neg", neg::serialize(neg::gen_fdm({"8", "9"})));
    CliRun mism = run_cli("equiv " + a.string() + " " + c.string());
    CHECK(mism.exit_code == 4);
}

TEST_CASE("metrics") {
    auto fdm = write("fdm_m.neg", neg::serialize(neg::gen_fdm({"8"})));
    CliRun r = run_cli("metrics " + fdm.string());
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("out: 6") != std::string::npos);

    auto pp = write("pp_m.neg", neg::serialize(neg::gen_pingpong({"8"})));
    CHECK(run_cli("metrics " + pp.string()).exit_code == 4);
}

TEST_CASE("gen emits parseable, deterministic documents") {
    CliRun fdm = run_cli("gen fdm --times 8,9,10");
    CHECK(fdm.exit_code == 0);
    neg::ParseResult parsed = neg::parse_negotiation(fdm.output);
    REQUIRE(parsed.negotiation.has_value());
    CHECK(*parsed.negotiation == neg::gen_fdm({"8", "9", "10"}));

    CliRun r1 = run_cli("gen random-sdan --seed 7 --atoms 6");
    CliRun r2 = run_cli("gen random-sdan --seed 7 --atoms 6");
    CHECK(r1.output == r2.output);

    auto cnf = write("phi.cnf", "p cnf 2 2\n1 -2 0\n2 0\n");
    CliRun sat = run_cli("gen sat --cnf " + cnf.string());
    CHECK(sat.exit_code == 0);
    CHECK(neg::parse_negotiation(sat.output).negotiation.has_value());

    CliRun bad = run_cli("gen fdm --times ''");
    CHECK(bad.exit_code == 2);
    CliRun nofam = run_cli("gen nosuch");
    CHECK(nofam.exit_code == 2);
}

TEST_CASE("summarize --method both never fails on reducible corpus instances") {
    // the end-to-end gate: reduction and state-space summaries must agree
    std::size_t swept = 0;
    for (const auto& inst : corpus::full_corpus()) {
        neg::Classification c = neg::classify(inst.n);
        if (!c.acyclic || !c.weakly_deterministic) continue;
        if (inst.name.rfind("sat_", 0) == 0 || inst.name.rfind("sdan_", 0) == 0)
            if (++swept > 10) continue; // hand instances plus a generator sample
        auto file = write("both_" + inst.name + ".neg", neg::serialize(inst.n));
        CliRun r = run_cli("summarize --method both " + file.string());
        CHECK_MESSAGE(r.exit_code == 0, inst.name);
        CHECK_MESSAGE(r.output.find("PASS") != std::string::npos, inst.name);
    }
}

TEST_CASE("machine outputs are well-formed documents, stable across runs") {
    auto fdm = write("fdm_k.neg", neg::serialize(neg::gen_fdm({"8"})));
    const std::vector<std::pair<std::string, std::string>> commands{
        {"check", "verdict"},
        {"classify", "classification"},
        {"metrics", "metrics"},
        {"summarize", "summary"},
        {"reduce", "reduction"},
    };
    for (const auto& [sub, expected_kind] : commands) {
        CliRun r1 = run_cli(sub + " --format machine " + fdm.string());
        CliRun r2 = run_cli(sub + " --format machine " + fdm.string());
        CHECK(r1.exit_code == 0);
        CHECK(r1.output == r2.output);
        std::string kind;
        CHECK_MESSAGE(neg::well_formed_document(r1.output, &kind), sub);
        CHECK(kind == expected_kind);
    }

    auto other = write("fdm_k2.neg", neg::serialize(neg::gen_fdm_unsound({"8"})));
    CliRun eq = run_cli("equiv --format machine " + fdm.string() + " " + other.string());
    std::string kind;
    CHECK(neg::well_formed_document(eq.output, &kind));
    CHECK(kind == "equivalence");
}

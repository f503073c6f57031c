#include "neg/analysis.hpp"
#include "neg/errors.hpp"
#include "neg/generators.hpp"
#include "neg/io.hpp"
#include "neg/reduce.hpp"
#include "neg/relation.hpp"
#include "neg/semantics.hpp"
#include "neg/summary.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

constexpr int kExitAnswered = 0;
constexpr int kExitInternal = 1;
constexpr int kExitParse = 2;
constexpr int kExitBudget = 3;
constexpr int kExitPrecondition = 4;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw neg::NegotiationError("cannot read '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw neg::NegotiationError("cannot write '" + path + "'");
    out << content;
}

/// Loads and fully validates a negotiation document, or exits with code 2.
neg::Negotiation load_negotiation(const std::string& path) {
    neg::ParseResult parsed = neg::parse_negotiation(read_file(path));
    if (!parsed.negotiation) {
        for (const auto& d : parsed.diagnostics)
            std::cerr << path << ": " << neg::to_string(d) << "\n";
        std::exit(kExitParse);
    }
    return std::move(*parsed.negotiation);
}

std::string witness_text(const std::vector<std::pair<neg::Symbol, neg::Symbol>>& w) {
    std::ostringstream os;
    for (std::size_t i = 0; i < w.size(); ++i)
        os << (i ? " " : "") << "(" << w[i].first << "," << w[i].second << ")";
    return os.str();
}

std::string joined(const std::set<neg::Symbol>& xs) {
    std::ostringstream os;
    bool first = true;
    for (const auto& x : xs) {
        os << (first ? "" : ", ") << x;
        first = false;
    }
    return os.str();
}

void print_verdict(const neg::SoundnessVerdict& v, const std::string& format) {
    if (format == "machine") {
        std::cout << neg::serialize_verdict(v);
        return;
    }
    std::cout << "sound: " << (v.sound ? "true" : "false") << "\n";
    if (!v.unreached_atoms.empty())
        std::cout << "unreached atoms: " << joined(v.unreached_atoms) << "\n";
    if (v.witness) std::cout << "witness: " << witness_text(*v.witness) << "\n";
}

void print_summary(const neg::Summary& s, const neg::Negotiation& n,
                   const std::string& format) {
    if (format == "machine") {
        std::cout << neg::serialize_summary(s, n);
        return;
    }
    std::cout << "sound: " << (s.verdict.sound ? "true" : "false") << "\n";
    if (!s.verdict.sound) {
        if (!s.verdict.unreached_atoms.empty())
            std::cout << "unreached atoms: " << joined(s.verdict.unreached_atoms) << "\n";
        if (s.verdict.witness)
            std::cout << "witness: " << witness_text(*s.verdict.witness) << "\n";
        return;
    }
    for (const auto& [outcome, rel] : s.relations) {
        std::cout << "summary '" << outcome << "': " << rel.pair_count() << " pairs\n";
        for (const auto& [from, tos] : rel.succ)
            for (const auto& to : tos) {
                std::cout << "  (";
                for (std::size_t i = 0; i < from.size(); ++i)
                    std::cout << (i ? "," : "") << from[i];
                std::cout << ") -> (";
                for (std::size_t i = 0; i < to.size(); ++i)
                    std::cout << (i ? "," : "") << to[i];
                std::cout << ")\n";
            }
    }
}

/// Summary carried by a fully reduced single-atom negotiation: per final
/// outcome, the lifted transformer of the one remaining atom.
neg::Summary summary_of_single_atom(const neg::Negotiation& n) {
    neg::Summary s;
    s.verdict.sound = true;
    auto domain = std::make_shared<const neg::Domain>(neg::Domain::of(n));
    const neg::Atom& atom = n.atom(n.final);
    for (const auto& r : atom.outcomes)
        s.relations.emplace(r, neg::lift(n, atom.delta.at(r), domain));
    return s;
}

struct ReduceOutcome {
    neg::Negotiation result;
    neg::ReductionTrace trace;
    bool sdan = false;
    std::size_t merge_count = 0;
    std::size_t d_shortcut_count = 0;
    neg::Metrics bounds;
};

/// Dispatches on the classification; exits with code 4 when no reduction
/// strategy applies.
ReduceOutcome run_reduction(const neg::Negotiation& n, const neg::ExploreBudget& budget) {
    neg::Classification c = neg::classify(n);
    if (c.deterministic && c.acyclic) {
        neg::SdanResult r = neg::reduce_sdan(n, budget);
        return {std::move(r.result), std::move(r.trace), true,
                r.merge_count, r.d_shortcut_count, std::move(r.bounds)};
    }
    if (c.weakly_deterministic && c.acyclic) {
        neg::ReductionResult r = neg::reduce_weakly_deterministic(n);
        return {std::move(r.result), std::move(r.trace), false, 0, 0, {}};
    }
    std::cerr << "input is not an acyclic (weakly) deterministic negotiation; "
                 "use 'summarize --method statespace'\n";
    std::exit(kExitPrecondition);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"negotiation soundness, summarization and reduction toolkit"};
    app.require_subcommand(1);

    std::string file, other_file, out_path, trace_path, format = "text";
    std::string method = "statespace";
    std::string dot_path, graph_path, cnf_path, times_csv = "8,9,10";
    std::size_t budget_markings = 1'000'000;
    std::uint64_t seed = 1;
    std::size_t g_atoms = 6, g_agents = 3, g_outcomes = 2, g_states = 2;

    auto add_format = [&format](CLI::App* cmd) {
        cmd->add_option("--format", format, "output format")
            ->check(CLI::IsMember({"text", "machine"}));
    };
    auto add_budget = [&budget_markings](CLI::App* cmd) {
        cmd->add_option("--budget", budget_markings, "marking exploration cap");
    };

    CLI::App* check = app.add_subcommand("check", "decide soundness");
    check->add_option("file", file, "negotiation document")->required();
    add_format(check);
    add_budget(check);
    check->add_option("--dot", dot_path, "write the reachability graph as DOT");
    check->add_option("--graph", graph_path, "write the reachability graph as text");

    CLI::App* classify_cmd = app.add_subcommand("classify", "structural classification");
    classify_cmd->add_option("file", file, "negotiation document")->required();
    add_format(classify_cmd);

    CLI::App* summarize = app.add_subcommand("summarize", "compute summary transformers");
    summarize->add_option("file", file, "negotiation document")->required();
    summarize->add_option("--method", method, "reduce | statespace | both")
        ->check(CLI::IsMember({"reduce", "statespace", "both"}));
    add_format(summarize);
    add_budget(summarize);

    CLI::App* reduce_cmd = app.add_subcommand("reduce", "apply the reduction rules");
    reduce_cmd->add_option("file", file, "negotiation document")->required();
    reduce_cmd->add_option("-o,--out", out_path, "write the reduced negotiation here");
    reduce_cmd->add_option("--trace", trace_path, "write the replayable trace here");
    add_format(reduce_cmd);
    add_budget(reduce_cmd);

    CLI::App* equiv = app.add_subcommand("equiv", "decide equivalence of two negotiations");
    equiv->add_option("first", file, "negotiation document")->required();
    equiv->add_option("second", other_file, "negotiation document")->required();
    add_format(equiv);
    add_budget(equiv);

    CLI::App* metrics_cmd = app.add_subcommand("metrics", "Out/Shoc reduction bounds");
    metrics_cmd->add_option("file", file, "negotiation document")->required();
    add_format(metrics_cmd);
    add_budget(metrics_cmd);

    CLI::App* gen = app.add_subcommand("gen", "generate a negotiation instance");
    std::string family;
    gen->add_option("family", family, "fdm | fdm-unsound | pingpong | sat | random-sdan")
        ->required()
        ->check(CLI::IsMember({"fdm", "fdm-unsound", "pingpong", "sat", "random-sdan"}));
    gen->add_option("-o,--out", out_path, "output file (stdout when omitted)");
    gen->add_option("--times", times_csv, "comma-separated time states for the fdm family");
    gen->add_option("--cnf", cnf_path, "DIMACS file for the sat family");
    gen->add_option("--seed", seed, "random-sdan seed");
    gen->add_option("--atoms", g_atoms, "random-sdan atom count");
    gen->add_option("--agents", g_agents, "random-sdan agent count");
    gen->add_option("--outcomes", g_outcomes, "random-sdan outcomes per atom");
    gen->add_option("--states", g_states, "random-sdan states per agent");

    CLI::App* replay_cmd = app.add_subcommand("replay", "re-apply a reduction trace");
    replay_cmd->add_option("file", file, "source negotiation document")->required();
    replay_cmd->add_option("trace", trace_path, "trace file")->required();
    replay_cmd->add_option("-o,--out", out_path, "write the replayed result here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitParse;
    }

    neg::ExploreBudget budget{budget_markings};

    try {
        if (*check) {
            neg::Negotiation n = load_negotiation(file);
            neg::SoundnessVerdict v = neg::check_soundness(n, budget);
            if (!dot_path.empty() || !graph_path.empty()) {
                neg::ReachabilityGraph g = neg::reach(n, budget);
                if (!dot_path.empty()) write_file(dot_path, neg::reach_to_dot(g, n));
                if (!graph_path.empty()) write_file(graph_path, neg::reach_to_text(g, n));
            }
            print_verdict(v, format);
            return kExitAnswered;
        }

        if (*classify_cmd) {
            neg::Negotiation n = load_negotiation(file);
            neg::Classification c = neg::classify(n);
            if (format == "machine") {
                std::cout << neg::serialize_classification(c);
            } else {
                std::cout << "acyclic: " << (c.acyclic ? "true" : "false") << "\n";
                std::cout << "deterministic: " << (c.deterministic ? "true" : "false") << "\n";
                std::cout << "weakly deterministic: "
                          << (c.weakly_deterministic ? "true" : "false") << "\n";
                std::cout << "deterministic agents: " << joined(c.deterministic_agents)
                          << "\n";
            }
            return kExitAnswered;
        }

        if (*summarize) {
            neg::Negotiation n = load_negotiation(file);
            if (method == "statespace") {
                neg::Summary s = neg::summarize_statespace(n, {budget, {}});
                print_summary(s, n, format);
                return kExitAnswered;
            }
            if (method == "reduce") {
                ReduceOutcome r = run_reduction(n, budget);
                if (r.result.atoms.size() == 1) {
                    print_summary(summary_of_single_atom(r.result), r.result, format);
                } else if (format == "machine") {
                    neg::Summary s;
                    s.verdict.sound = false;
                    std::cout << neg::serialize_summary(s, n);
                } else {
                    std::cout << "sound: false (reduction fixpoint has "
                              << r.result.atoms.size() << " atoms)\n";
                }
                return kExitAnswered;
            }
            // both: cross-validate the reduction result against the state space
            ReduceOutcome r = run_reduction(n, budget);
            neg::Summary state = neg::summarize_statespace(n, {budget, {}});
            bool reduced_sound = r.result.atoms.size() == 1;
            bool pass = false;
            if (!reduced_sound && !state.verdict.sound) {
                pass = true;
            } else if (reduced_sound && state.verdict.sound) {
                neg::Summary red = summary_of_single_atom(r.result);
                pass = red.relations == state.relations;
            }
            std::cout << (pass ? "PASS" : "FAIL")
                      << " (reduction vs. state space)\n";
            if (pass && state.verdict.sound) print_summary(state, n, format);
            return pass ? kExitAnswered : kExitInternal;
        }

        if (*reduce_cmd) {
            neg::Negotiation n = load_negotiation(file);
            ReduceOutcome r = run_reduction(n, budget);
            if (!out_path.empty()) write_file(out_path, neg::serialize(r.result));
            if (!trace_path.empty()) write_file(trace_path, neg::serialize_trace(r.trace));
            bool sound = r.result.atoms.size() == 1;
            if (format == "machine") {
                std::ostringstream os;
                os << "{\n  \"kind\": \"reduction\",\n";
                os << "  \"atoms_before\": " << n.atoms.size() << ",\n";
                os << "  \"atoms_after\": " << r.result.atoms.size() << ",\n";
                os << "  \"applications\": " << r.trace.applications.size() << ",\n";
                os << "  \"sound\": " << (sound ? "true" : "false");
                if (r.sdan) {
                    os << ",\n  \"merge_count\": " << r.merge_count;
                    os << ",\n  \"merge_bound\": " << r.bounds.out;
                    os << ",\n  \"d_shortcut_count\": " << r.d_shortcut_count;
                    os << ",\n  \"d_shortcut_bound\": " << r.bounds.shoc;
                }
                os << "\n}\n";
                std::cout << os.str();
            } else {
                std::cout << "atoms: " << n.atoms.size() << " -> " << r.result.atoms.size()
                          << "\n";
                std::cout << "applications: " << r.trace.applications.size() << "\n";
                if (r.sdan) {
                    std::cout << "merge applications: " << r.merge_count
                              << " (bound Out = " << r.bounds.out << ")\n";
                    std::cout << "d-shortcut applications: " << r.d_shortcut_count
                              << " (bound Shoc = " << r.bounds.shoc << ")\n";
                }
                std::cout << (sound ? "sound: true (single-atom fixpoint)"
                                    : "sound: false (stuck above one atom)")
                          << "\n";
            }
            return kExitAnswered;
        }

        if (*equiv) {
            neg::Negotiation a = load_negotiation(file);
            neg::Negotiation b = load_negotiation(other_file);
            neg::EquivalenceResult e = neg::equivalent(a, b, budget);
            if (format == "machine") {
                std::cout << neg::serialize_equivalence(e);
            } else {
                std::cout << "equivalent: " << (e.equivalent ? "true" : "false") << "\n";
                std::cout << "reason: " << e.reason << "\n";
            }
            return kExitAnswered;
        }

        if (*metrics_cmd) {
            neg::Negotiation n = load_negotiation(file);
            neg::Metrics m = neg::metrics(n, budget);
            if (format == "machine") {
                std::cout << neg::serialize_metrics(m);
            } else {
                std::cout << "out: " << m.out << "\n";
                std::cout << "shoc: " << m.shoc << "\n";
                for (const auto& [key, val] : m.shoc_per_pair)
                    std::cout << "shoc(" << key.first << "," << key.second << ") = " << val
                              << "\n";
            }
            return kExitAnswered;
        }

        if (*gen) {
            neg::Negotiation n;
            try {
                if (family == "sat") {
                    if (cnf_path.empty()) {
                        std::cerr << "the sat family needs --cnf\n";
                        return kExitParse;
                    }
                    n = neg::gen_sat(neg::parse_dimacs(read_file(cnf_path)));
                } else if (family == "random-sdan") {
                    n = neg::gen_random_sdan(seed, g_atoms, g_agents, g_outcomes, g_states);
                } else {
                    std::vector<neg::Symbol> times;
                    std::stringstream ss(times_csv);
                    std::string item;
                    while (std::getline(ss, item, ','))
                        if (!item.empty()) times.push_back(item);
                    if (family == "fdm") n = neg::gen_fdm(times);
                    else if (family == "fdm-unsound") n = neg::gen_fdm_unsound(times);
                    else n = neg::gen_pingpong(times);
                }
            } catch (const neg::PreconditionError& e) {
                std::cerr << "bad parameters: " << e.what() << "\n";
                return kExitParse;
            }
            std::string doc = neg::serialize(n);
            if (out_path.empty())
                std::cout << doc;
            else
                write_file(out_path, doc);
            return kExitAnswered;
        }

        if (*replay_cmd) {
            neg::Negotiation source = load_negotiation(file);
            neg::TraceParseResult parsed = neg::parse_trace(read_file(trace_path));
            if (!parsed.trace) {
                for (const auto& d : parsed.diagnostics)
                    std::cerr << trace_path << ": " << neg::to_string(d) << "\n";
                return kExitParse;
            }
            neg::Negotiation result = neg::replay(source, *parsed.trace);
            std::string doc = neg::serialize(result);
            if (out_path.empty())
                std::cout << doc;
            else
                write_file(out_path, doc);
            std::cerr << "replayed " << parsed.trace->applications.size()
                      << " applications\n";
            return kExitAnswered;
        }
    } catch (const neg::BudgetError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBudget;
    } catch (const neg::PreconditionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPrecondition;
    } catch (const neg::NegotiationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitInternal;
}

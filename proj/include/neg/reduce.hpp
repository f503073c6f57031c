#pragma once

#include "neg/model.hpp"
#include "neg/semantics.hpp"

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace neg {

/// True iff after any occurrence of (atom, outcome) the target atom is
/// enabled: the atom's parties cover the target's, and every target party
/// is routed exactly to the target.
bool unconditionally_enables(const Negotiation& n, const Symbol& atom,
                             const Symbol& outcome, const Symbol& target);

struct MergeCandidate {
    Symbol atom;
    Symbol r1;  // lexicographically smaller outcome name
    Symbol r2;

    auto operator<=>(const MergeCandidate&) const = default;
};

/// All outcome pairs of non-final atoms with identical per-party target
/// sets, in canonical (atom, r1, r2) order. The final atom is excluded:
/// its outcomes are the observable final outcomes, and fusing them would
/// not preserve equivalence.
std::vector<MergeCandidate> find_merge(const Negotiation& n);

Negotiation apply_merge(const Negotiation& n, const Symbol& atom,
                        const Symbol& r1, const Symbol& r2);

struct ShortcutCandidate {
    Symbol atom;
    Symbol outcome;
    Symbol target;

    auto operator<=>(const ShortcutCandidate&) const = default;
};

/// Shortcut rule guard. (atom, outcome) must unconditionally enable the
/// target, and every candidate must keep the result a well-formed,
/// equivalent negotiation:
///
///  - For an internal target, if the target keeps any other incoming
///    reference (from another atom, or from another outcome of the same
///    atom), some such reference must be an exact arc to it. Quantifying
///    over "other atoms" only would admit applications that break
///    soundness; the correctness argument needs the wider reading.
///  - The final atom can only be shortcut when this is the sole reference
///    to it and `outcome` is the atom's only outcome. The rule then absorbs
///    the final atom: the acting atom becomes final and adopts the final
///    outcomes under their original names.
///  - A target that would lose its last reference is not removable when it
///    is the initial atom.
std::vector<ShortcutCandidate> find_shortcut(const Negotiation& n);

/// Shortcut candidates whose target has a single outcome or is the final
/// atom (the absorption case, where outcome count cannot grow).
std::vector<ShortcutCandidate> find_d_shortcut(const Negotiation& n);

Negotiation apply_shortcut(const Negotiation& n, const Symbol& atom,
                           const Symbol& outcome, const Symbol& target);

struct UselessArcCandidate {
    Symbol atom;
    Symbol agent;
    Symbol outcome;
    Symbol kept;     // n': some co-party is routed exactly here
    Symbol removed;  // n'': dropped from X(atom, agent, outcome)

    auto operator<=>(const UselessArcCandidate&) const = default;
};

std::vector<UselessArcCandidate> find_useless_arc(const Negotiation& n);

Negotiation apply_useless_arc(const Negotiation& n, const Symbol& atom,
                              const Symbol& agent, const Symbol& outcome,
                              const Symbol& kept, const Symbol& removed);

struct RuleApplication {
    enum class Rule { merge, shortcut, d_shortcut, useless_arc };

    Rule rule{};
    Symbol atom;                      // n
    Symbol r1, r2;                    // merge operands
    Symbol outcome;                   // shortcut outcome r / useless-arc r
    Symbol target;                    // shortcut n'
    Symbol agent;                     // useless-arc a
    Symbol kept, removed;             // useless-arc n', n''
    std::map<Symbol, Symbol> fresh;   // old outcome -> fresh outcome
    std::size_t atoms_before = 0;
    std::size_t atoms_after = 0;

    bool operator==(const RuleApplication&) const = default;
};

const char* rule_name(RuleApplication::Rule r);

struct ReductionTrace {
    std::string source_fingerprint;
    std::vector<RuleApplication> applications;

    bool operator==(const ReductionTrace&) const = default;
};

/// Traced variants of the rule applications (same action, plus the record).
std::pair<Negotiation, RuleApplication>
apply_merge_traced(const Negotiation& n, const Symbol& atom, const Symbol& r1,
                   const Symbol& r2);
std::pair<Negotiation, RuleApplication>
apply_shortcut_traced(const Negotiation& n, const Symbol& atom,
                      const Symbol& outcome, const Symbol& target, bool d_rule);
std::pair<Negotiation, RuleApplication>
apply_useless_arc_traced(const Negotiation& n, const Symbol& atom,
                         const Symbol& agent, const Symbol& outcome,
                         const Symbol& kept, const Symbol& removed);

struct ReductionResult {
    Negotiation result;
    ReductionTrace trace;
};

/// Exhaustive reduction of an acyclic, weakly deterministic negotiation.
/// Applies the first shortcut candidate, else the first useless-arc
/// candidate, else the first merge candidate, until none applies. The
/// merge rule enters only at the end, to fuse the outcomes feeding the
/// final atom before it is absorbed; shortcut and useless arc alone cannot
/// express that last step on well-formed negotiations. A sound input
/// reduces to a single atom (its summary); an unsound one gets stuck with
/// more than one atom.
ReductionResult reduce_weakly_deterministic(const Negotiation& n);

/// shoc(n, r): length of a shortest maximal occurrence sequence containing
/// (n, r), minus one. Pairs that occur in no sequence (possible only for
/// unsound inputs) are omitted from the map and the sum.
struct Metrics {
    std::size_t out = 0;
    std::size_t shoc = 0;
    std::map<std::pair<Symbol, Symbol>, std::size_t> shoc_per_pair;
};

/// Exhaustive metrics over all maximal occurrence sequences, evaluated by
/// shortest-path dynamic programming on the reachability graph. Requires
/// an acyclic negotiation.
Metrics metrics(const Negotiation& n, const ExploreBudget& budget = {});

struct SdanResult {
    Negotiation result;
    ReductionTrace trace;
    Metrics bounds;                   // metrics of the original input
    std::size_t merge_count = 0;
    std::size_t d_shortcut_count = 0;
};

/// Reduction strategy for deterministic acyclic negotiations: repeatedly
/// apply all available merges, then one d-shortcut whose target minimizes
/// the longest path to the final atom. On sound inputs this terminates at
/// a single atom within Out(N) merges and Shoc(N) d-shortcuts.
SdanResult reduce_sdan(const Negotiation& n, const ExploreBudget& budget = {});

/// Re-applies a recorded trace to `source`, verifying the fingerprint,
/// every guard, and the recorded fresh names. Returns the reproduced
/// negotiation.
Negotiation replay(const Negotiation& source, const ReductionTrace& trace);

} // namespace neg

#include "neg/io.hpp"

#include "neg/errors.hpp"

#include <algorithm>
#include <cstdint>
#include <sstream>

namespace neg {

std::string to_string(const Diagnostic& d) {
    std::ostringstream os;
    os << (d.kind == Diagnostic::Kind::syntax ? "syntax" : "semantic") << " error at line "
       << d.line << ", column " << d.col << ": " << d.message;
    return os.str();
}

// ---------------------------------------------------------------------------
// Positioned JSON subset reader (objects, arrays, strings, integers, bools).
// Positions let semantic diagnostics point at the offending element.
// ---------------------------------------------------------------------------

namespace {

struct JsonValue {
    enum class Type { object, array, string, number, boolean, null };

    Type type = Type::null;
    std::size_t line = 1, col = 1;
    std::string str;
    long long num = 0;
    bool flag = false;
    std::vector<std::pair<std::string, JsonValue>> members; // parse order
    std::vector<JsonValue> items;

    const JsonValue* find(const std::string& key) const {
        for (const auto& [k, v] : members)
            if (k == key) return &v;
        return nullptr;
    }
};

struct JsonError {
    std::size_t line, col;
    std::string message;
};

class JsonReader {
public:
    explicit JsonReader(std::string_view text) : text_(text) {}

    JsonValue parse() {
        JsonValue v = value();
        skip_ws();
        if (pos_ != text_.size()) fail("trailing content after document");
        return v;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0, line_ = 1, col_ = 1;

    [[noreturn]] void fail(const std::string& msg) { throw JsonError{line_, col_, msg}; }

    char peek() {
        if (pos_ >= text_.size()) fail("unexpected end of input");
        return text_[pos_];
    }

    char advance() {
        char c = peek();
        ++pos_;
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    void skip_ws() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == ' ' || c == '\t' || c == '\n' || c == '\r')
                advance();
            else
                break;
        }
    }

    void expect(char c) {
        if (pos_ >= text_.size() || text_[pos_] != c)
            fail(std::string("expected '") + c + "'");
        advance();
    }

    JsonValue value() {
        skip_ws();
        JsonValue v;
        v.line = line_;
        v.col = col_;
        char c = peek();
        if (c == '{') return object(v);
        if (c == '[') return array(v);
        if (c == '"') {
            v.type = JsonValue::Type::string;
            v.str = string_body();
            return v;
        }
        if (c == '-' || (c >= '0' && c <= '9')) return number(v);
        if (text_.compare(pos_, 4, "true") == 0) {
            v.type = JsonValue::Type::boolean;
            v.flag = true;
            for (int i = 0; i < 4; ++i) advance();
            return v;
        }
        if (text_.compare(pos_, 5, "false") == 0) {
            v.type = JsonValue::Type::boolean;
            for (int i = 0; i < 5; ++i) advance();
            return v;
        }
        if (text_.compare(pos_, 4, "null") == 0) {
            v.type = JsonValue::Type::null;
            for (int i = 0; i < 4; ++i) advance();
            return v;
        }
        fail("unexpected character");
    }

    JsonValue object(JsonValue v) {
        v.type = JsonValue::Type::object;
        expect('{');
        skip_ws();
        if (peek() == '}') {
            advance();
            return v;
        }
        for (;;) {
            skip_ws();
            if (peek() != '"') fail("expected object key");
            std::string key = string_body();
            skip_ws();
            expect(':');
            v.members.emplace_back(std::move(key), value());
            skip_ws();
            char c = advance();
            if (c == '}') return v;
            if (c != ',') fail("expected ',' or '}' in object");
        }
    }

    JsonValue array(JsonValue v) {
        v.type = JsonValue::Type::array;
        expect('[');
        skip_ws();
        if (peek() == ']') {
            advance();
            return v;
        }
        for (;;) {
            v.items.push_back(value());
            skip_ws();
            char c = advance();
            if (c == ']') return v;
            if (c != ',') fail("expected ',' or ']' in array");
        }
    }

    JsonValue number(JsonValue v) {
        v.type = JsonValue::Type::number;
        std::string digits;
        if (peek() == '-') digits += advance();
        if (!(peek() >= '0' && peek() <= '9')) fail("malformed number");
        while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9')
            digits += advance();
        v.num = std::stoll(digits);
        return v;
    }

    std::string string_body() {
        expect('"');
        std::string out;
        for (;;) {
            char c = advance();
            if (c == '"') return out;
            if (c == '\\') {
                char e = advance();
                switch (e) {
                    case '"': out += '"'; break;
                    case '\\': out += '\\'; break;
                    case '/': out += '/'; break;
                    case 'b': out += '\b'; break;
                    case 'f': out += '\f'; break;
                    case 'n': out += '\n'; break;
                    case 'r': out += '\r'; break;
                    case 't': out += '\t'; break;
                    case 'u': {
                        unsigned code = 0;
                        for (int i = 0; i < 4; ++i) {
                            char h = advance();
                            code <<= 4;
                            if (h >= '0' && h <= '9') code |= unsigned(h - '0');
                            else if (h >= 'a' && h <= 'f') code |= unsigned(h - 'a' + 10);
                            else if (h >= 'A' && h <= 'F') code |= unsigned(h - 'A' + 10);
                            else fail("malformed \\u escape");
                        }
                        if (code < 0x80) {
                            out += static_cast<char>(code);
                        } else if (code < 0x800) {
                            out += static_cast<char>(0xc0 | (code >> 6));
                            out += static_cast<char>(0x80 | (code & 0x3f));
                        } else {
                            out += static_cast<char>(0xe0 | (code >> 12));
                            out += static_cast<char>(0x80 | ((code >> 6) & 0x3f));
                            out += static_cast<char>(0x80 | (code & 0x3f));
                        }
                        break;
                    }
                    default: fail("unknown escape sequence");
                }
            } else if (static_cast<unsigned char>(c) < 0x20) {
                fail("unescaped control character in string");
            } else {
                out += c;
            }
        }
    }
};

// ---------------------------------------------------------------------------
// Canonical JSON writer.
// ---------------------------------------------------------------------------

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    out += '"';
    return out;
}

std::string quoted_list(const std::vector<Symbol>& xs) {
    std::string out = "[";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ", ";
        out += quote(xs[i]);
    }
    out += "]";
    return out;
}

std::string quoted_list(const std::set<Symbol>& xs) {
    return quoted_list(std::vector<Symbol>(xs.begin(), xs.end()));
}

std::string tuple_pair(const Tuple& in, const Tuple& out) {
    return "[" + quoted_list(in) + ", " + quoted_list(out) + "]";
}

// ---------------------------------------------------------------------------
// Negotiation documents.
// ---------------------------------------------------------------------------

struct Extract {
    std::vector<Diagnostic>& diags;

    void semantic(const JsonValue& at, const std::string& msg) {
        diags.push_back({Diagnostic::Kind::semantic, at.line, at.col, msg});
    }

    bool require(const JsonValue& v, JsonValue::Type t, const std::string& what) {
        if (v.type == t) return true;
        semantic(v, what);
        return false;
    }

    bool unique_keys(const JsonValue& obj, const std::string& what) {
        std::set<std::string> seen;
        bool ok = true;
        for (const auto& [k, v] : obj.members)
            if (!seen.insert(k).second) {
                semantic(v, "duplicate " + what + " '" + k + "'");
                ok = false;
            }
        return ok;
    }

    std::optional<std::vector<Symbol>> string_list(const JsonValue& v, const std::string& what) {
        if (!require(v, JsonValue::Type::array, what + " must be an array of strings"))
            return std::nullopt;
        std::vector<Symbol> out;
        for (const auto& item : v.items) {
            if (item.type != JsonValue::Type::string) {
                semantic(item, what + " entries must be strings");
                return std::nullopt;
            }
            out.push_back(item.str);
        }
        return out;
    }
};

ParseResult extract_negotiation(const JsonValue& root) {
    ParseResult result;
    Extract ex{result.diagnostics};

    if (!ex.require(root, JsonValue::Type::object, "document root must be an object"))
        return result;
    ex.unique_keys(root, "top-level key");
    static const std::set<std::string> known{"agents", "atoms", "initial",
                                             "final", "transitions", "transformers"};
    for (const auto& [k, v] : root.members)
        if (!known.count(k)) ex.semantic(v, "unknown top-level key '" + k + "'");
    for (const auto& k : known)
        if (!root.find(k)) ex.semantic(root, "missing required key '" + k + "'");
    if (!result.diagnostics.empty()) return result;

    Negotiation n;

    const JsonValue& agents = *root.find("agents");
    if (!ex.require(agents, JsonValue::Type::object, "'agents' must be an object"))
        return result;
    ex.unique_keys(agents, "agent");
    for (const auto& [name, states] : agents.members) {
        auto list = ex.string_list(states, "agent state list");
        if (!list) return result;
        n.add_agent(name, std::move(*list));
    }

    const JsonValue& atoms = *root.find("atoms");
    if (!ex.require(atoms, JsonValue::Type::object, "'atoms' must be an object"))
        return result;
    ex.unique_keys(atoms, "atom");
    for (const auto& [id, spec] : atoms.members) {
        if (!ex.require(spec, JsonValue::Type::object, "atom entry must be an object"))
            return result;
        const JsonValue* parties = spec.find("parties");
        const JsonValue* outcomes = spec.find("outcomes");
        if (!parties || !outcomes) {
            ex.semantic(spec, "atom '" + id + "' needs 'parties' and 'outcomes'");
            return result;
        }
        auto pl = ex.string_list(*parties, "parties");
        auto ol = ex.string_list(*outcomes, "outcomes");
        if (!pl || !ol) return result;
        n.add_atom(id, std::move(*pl), std::move(*ol));
    }

    const JsonValue& initial = *root.find("initial");
    const JsonValue& final_v = *root.find("final");
    if (!ex.require(initial, JsonValue::Type::string, "'initial' must be a string") ||
        !ex.require(final_v, JsonValue::Type::string, "'final' must be a string"))
        return result;
    n.initial = initial.str;
    n.final = final_v.str;
    if (!n.find_atom(n.initial))
        ex.semantic(initial, "initial atom '" + n.initial + "' is not declared");
    if (!n.find_atom(n.final))
        ex.semantic(final_v, "final atom '" + n.final + "' is not declared");

    const JsonValue& transitions = *root.find("transitions");
    if (!ex.require(transitions, JsonValue::Type::array, "'transitions' must be an array"))
        return result;
    for (const auto& tr : transitions.items) {
        if (!ex.require(tr, JsonValue::Type::object, "transition entries must be objects"))
            return result;
        const JsonValue* atom = tr.find("atom");
        const JsonValue* agent = tr.find("agent");
        const JsonValue* outcome = tr.find("outcome");
        const JsonValue* targets = tr.find("targets");
        if (!atom || !agent || !outcome || !targets ||
            atom->type != JsonValue::Type::string ||
            agent->type != JsonValue::Type::string ||
            outcome->type != JsonValue::Type::string) {
            ex.semantic(tr, "transition needs string 'atom', 'agent', 'outcome' and 'targets'");
            return result;
        }
        auto tl = ex.string_list(*targets, "targets");
        if (!tl) return result;
        if (!n.find_atom(atom->str)) {
            ex.semantic(*atom, "transition references unknown atom '" + atom->str + "'");
            continue;
        }
        TransitionKey key{atom->str, agent->str, outcome->str};
        if (n.transitions.count(key)) {
            ex.semantic(tr, "duplicate transition for (" + atom->str + ", " + agent->str +
                                ", " + outcome->str + ")");
            continue;
        }
        n.set_transition(atom->str, agent->str, outcome->str,
                         std::set<Symbol>(tl->begin(), tl->end()));
    }

    const JsonValue& transformers = *root.find("transformers");
    if (!ex.require(transformers, JsonValue::Type::object, "'transformers' must be an object"))
        return result;
    ex.unique_keys(transformers, "transformer atom");
    for (const auto& [id, per_outcome] : transformers.members) {
        const Atom* atom = n.find_atom(id);
        if (!atom) {
            ex.semantic(per_outcome, "transformers reference unknown atom '" + id + "'");
            continue;
        }
        if (!ex.require(per_outcome, JsonValue::Type::object,
                        "transformers of an atom must be an object"))
            return result;
        ex.unique_keys(per_outcome, "transformer outcome");
        for (const auto& [outcome, body] : per_outcome.members) {
            Transformer t;
            t.parties = atom->parties;
            if (body.type == JsonValue::Type::string && body.str == "identity") {
                bool known_spaces = true;
                for (const auto& p : t.parties)
                    if (!n.find_agent(p)) known_spaces = false;
                if (!known_spaces) {
                    ex.semantic(body, "cannot expand 'identity': unknown party state space");
                    continue;
                }
                t = identity_transformer(n, t.parties);
            } else if (body.type == JsonValue::Type::array) {
                bool ok = true;
                for (const auto& pair : body.items) {
                    if (pair.type != JsonValue::Type::array || pair.items.size() != 2) {
                        ex.semantic(pair, "transformer pairs must be [input, output] tuples");
                        ok = false;
                        break;
                    }
                    auto in = ex.string_list(pair.items[0], "input tuple");
                    auto out = ex.string_list(pair.items[1], "output tuple");
                    if (!in || !out) {
                        ok = false;
                        break;
                    }
                    t.pairs.emplace(std::move(*in), std::move(*out));
                }
                if (!ok) continue;
            } else {
                ex.semantic(body, "transformer must be \"identity\" or a pair list");
                continue;
            }
            if (n.find_atom(id)) n.set_delta(id, outcome, std::move(t));
        }
    }

    if (!result.diagnostics.empty()) return result;

    for (const auto& violation : validate(n))
        ex.semantic(root, violation);
    if (!result.diagnostics.empty()) return result;

    result.negotiation = std::move(n);
    return result;
}

} // namespace

ParseResult parse_negotiation(std::string_view text) {
    ParseResult result;
    try {
        JsonValue root = JsonReader(text).parse();
        return extract_negotiation(root);
    } catch (const JsonError& e) {
        result.diagnostics.push_back(
            {Diagnostic::Kind::syntax, e.line, e.col, e.message});
        return result;
    }
}

std::string serialize(const Negotiation& n) {
    if (auto violations = validate(n); !violations.empty())
        throw PreconditionError("cannot serialize invalid negotiation: " + violations.front());

    std::ostringstream os;
    os << "{\n";

    os << "  \"agents\": {\n";
    for (std::size_t i = 0; i < n.agents.size(); ++i)
        os << "    " << quote(n.agents[i].name) << ": " << quoted_list(n.agents[i].states)
           << (i + 1 < n.agents.size() ? "," : "") << "\n";
    os << "  },\n";

    os << "  \"atoms\": {\n";
    std::size_t count = 0;
    for (const auto& [id, atom] : n.atoms) {
        os << "    " << quote(id) << ": {\"parties\": " << quoted_list(atom.parties)
           << ", \"outcomes\": " << quoted_list(atom.outcomes) << "}"
           << (++count < n.atoms.size() ? "," : "") << "\n";
    }
    os << "  },\n";

    os << "  \"initial\": " << quote(n.initial) << ",\n";
    os << "  \"final\": " << quote(n.final) << ",\n";

    os << "  \"transitions\": [\n";
    count = 0;
    for (const auto& [key, targets] : n.transitions) {
        os << "    {\"atom\": " << quote(key.atom) << ", \"agent\": " << quote(key.agent)
           << ", \"outcome\": " << quote(key.outcome)
           << ", \"targets\": " << quoted_list(targets) << "}"
           << (++count < n.transitions.size() ? "," : "") << "\n";
    }
    os << "  ],\n";

    os << "  \"transformers\": {\n";
    count = 0;
    for (const auto& [id, atom] : n.atoms) {
        os << "    " << quote(id) << ": {";
        for (std::size_t i = 0; i < atom.outcomes.size(); ++i) {
            const auto& r = atom.outcomes[i];
            if (i) os << ", ";
            os << quote(r) << ": ";
            const Transformer& t = atom.delta.at(r);
            if (is_identity(n, t)) {
                os << "\"identity\"";
            } else {
                os << "[";
                std::size_t k = 0;
                for (const auto& [in, out] : t.pairs)
                    os << (k++ ? ", " : "") << tuple_pair(in, out);
                os << "]";
            }
        }
        os << "}" << (++count < n.atoms.size() ? "," : "") << "\n";
    }
    os << "  }\n";

    os << "}\n";
    return os.str();
}

std::string fingerprint(const Negotiation& n) {
    std::string doc = serialize(n);
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : doc) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// ---------------------------------------------------------------------------
// Traces.
// ---------------------------------------------------------------------------

std::string serialize_trace(const ReductionTrace& t) {
    std::ostringstream os;
    os << "{\n";
    os << "  \"kind\": \"trace\",\n";
    os << "  \"source\": " << quote(t.source_fingerprint) << ",\n";
    os << "  \"applications\": [\n";
    for (std::size_t i = 0; i < t.applications.size(); ++i) {
        const RuleApplication& a = t.applications[i];
        os << "    {\"rule\": " << quote(rule_name(a.rule));
        switch (a.rule) {
            case RuleApplication::Rule::merge:
                os << ", \"atom\": " << quote(a.atom) << ", \"r1\": " << quote(a.r1)
                   << ", \"r2\": " << quote(a.r2);
                break;
            case RuleApplication::Rule::shortcut:
            case RuleApplication::Rule::d_shortcut:
                os << ", \"atom\": " << quote(a.atom) << ", \"outcome\": " << quote(a.outcome)
                   << ", \"target\": " << quote(a.target);
                break;
            case RuleApplication::Rule::useless_arc:
                os << ", \"atom\": " << quote(a.atom) << ", \"agent\": " << quote(a.agent)
                   << ", \"outcome\": " << quote(a.outcome) << ", \"kept\": " << quote(a.kept)
                   << ", \"removed\": " << quote(a.removed);
                break;
        }
        if (!a.fresh.empty()) {
            os << ", \"fresh\": {";
            std::size_t k = 0;
            for (const auto& [from, to] : a.fresh)
                os << (k++ ? ", " : "") << quote(from) << ": " << quote(to);
            os << "}";
        }
        os << ", \"atoms_before\": " << a.atoms_before
           << ", \"atoms_after\": " << a.atoms_after << "}"
           << (i + 1 < t.applications.size() ? "," : "") << "\n";
    }
    os << "  ]\n";
    os << "}\n";
    return os.str();
}

TraceParseResult parse_trace(std::string_view text) {
    TraceParseResult result;
    auto semantic = [&result](const JsonValue& at, const std::string& msg) {
        result.diagnostics.push_back({Diagnostic::Kind::semantic, at.line, at.col, msg});
    };
    try {
        JsonValue root = JsonReader(text).parse();
        if (root.type != JsonValue::Type::object) {
            semantic(root, "trace document root must be an object");
            return result;
        }
        const JsonValue* kind = root.find("kind");
        if (!kind || kind->type != JsonValue::Type::string || kind->str != "trace") {
            semantic(root, "document kind must be \"trace\"");
            return result;
        }
        ReductionTrace t;
        if (const JsonValue* src = root.find("source");
            src && src->type == JsonValue::Type::string)
            t.source_fingerprint = src->str;
        const JsonValue* apps = root.find("applications");
        if (!apps || apps->type != JsonValue::Type::array) {
            semantic(root, "trace needs an 'applications' array");
            return result;
        }
        for (const auto& av : apps->items) {
            if (av.type != JsonValue::Type::object) {
                semantic(av, "trace applications must be objects");
                return result;
            }
            auto str = [&](const char* key) -> std::string {
                const JsonValue* v = av.find(key);
                return v && v->type == JsonValue::Type::string ? v->str : std::string{};
            };
            auto num = [&](const char* key) -> std::size_t {
                const JsonValue* v = av.find(key);
                return v && v->type == JsonValue::Type::number
                           ? static_cast<std::size_t>(v->num)
                           : 0;
            };
            RuleApplication a;
            const std::string rule = str("rule");
            if (rule == "merge") {
                a.rule = RuleApplication::Rule::merge;
                a.atom = str("atom");
                a.r1 = str("r1");
                a.r2 = str("r2");
            } else if (rule == "shortcut" || rule == "d-shortcut") {
                a.rule = rule == "shortcut" ? RuleApplication::Rule::shortcut
                                            : RuleApplication::Rule::d_shortcut;
                a.atom = str("atom");
                a.outcome = str("outcome");
                a.target = str("target");
            } else if (rule == "useless-arc") {
                a.rule = RuleApplication::Rule::useless_arc;
                a.atom = str("atom");
                a.agent = str("agent");
                a.outcome = str("outcome");
                a.kept = str("kept");
                a.removed = str("removed");
            } else {
                semantic(av, "unknown rule '" + rule + "'");
                return result;
            }
            if (const JsonValue* fresh = av.find("fresh")) {
                if (fresh->type != JsonValue::Type::object) {
                    semantic(*fresh, "'fresh' must be an object");
                    return result;
                }
                for (const auto& [k, v] : fresh->members) {
                    if (v.type != JsonValue::Type::string) {
                        semantic(v, "fresh names must be strings");
                        return result;
                    }
                    a.fresh[k] = v.str;
                }
            }
            a.atoms_before = num("atoms_before");
            a.atoms_after = num("atoms_after");
            t.applications.push_back(std::move(a));
        }
        result.trace = std::move(t);
        return result;
    } catch (const JsonError& e) {
        result.diagnostics.push_back({Diagnostic::Kind::syntax, e.line, e.col, e.message});
        return result;
    }
}

// ---------------------------------------------------------------------------
// Reports.
// ---------------------------------------------------------------------------

namespace {

std::string witness_json(const std::vector<std::pair<Symbol, Symbol>>& w) {
    std::string out = "[";
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) out += ", ";
        out += "[" + quote(w[i].first) + ", " + quote(w[i].second) + "]";
    }
    out += "]";
    return out;
}

} // namespace

std::string serialize_verdict(const SoundnessVerdict& v) {
    std::ostringstream os;
    os << "{\n";
    os << "  \"kind\": \"verdict\",\n";
    os << "  \"sound\": " << (v.sound ? "true" : "false");
    if (!v.unreached_atoms.empty())
        os << ",\n  \"unreached_atoms\": " << quoted_list(v.unreached_atoms);
    if (v.witness) os << ",\n  \"witness\": " << witness_json(*v.witness);
    os << "\n}\n";
    return os.str();
}

std::string serialize_classification(const Classification& c) {
    std::ostringstream os;
    os << "{\n";
    os << "  \"kind\": \"classification\",\n";
    os << "  \"acyclic\": " << (c.acyclic ? "true" : "false") << ",\n";
    os << "  \"deterministic\": " << (c.deterministic ? "true" : "false") << ",\n";
    os << "  \"weakly_deterministic\": " << (c.weakly_deterministic ? "true" : "false")
       << ",\n";
    os << "  \"deterministic_agents\": " << quoted_list(c.deterministic_agents) << "\n";
    os << "}\n";
    return os.str();
}

std::string serialize_summary(const Summary& s, const Negotiation& n) {
    std::ostringstream os;
    os << "{\n";
    os << "  \"kind\": \"summary\",\n";
    os << "  \"sound\": " << (s.verdict.sound ? "true" : "false");
    if (!s.verdict.sound) {
        if (!s.verdict.unreached_atoms.empty())
            os << ",\n  \"unreached_atoms\": " << quoted_list(s.verdict.unreached_atoms);
        if (s.verdict.witness) os << ",\n  \"witness\": " << witness_json(*s.verdict.witness);
        os << "\n}\n";
        return os.str();
    }
    os << ",\n  \"agents\": {\n";
    for (std::size_t i = 0; i < n.agents.size(); ++i)
        os << "    " << quote(n.agents[i].name) << ": " << quoted_list(n.agents[i].states)
           << (i + 1 < n.agents.size() ? "," : "") << "\n";
    os << "  },\n";
    os << "  \"relations\": {\n";
    std::size_t count = 0;
    for (const auto& [outcome, rel] : s.relations) {
        os << "    " << quote(outcome) << ": [\n";
        std::vector<std::string> lines;
        for (const auto& [from, tos] : rel.succ)
            for (const auto& to : tos) lines.push_back(tuple_pair(from, to));
        for (std::size_t i = 0; i < lines.size(); ++i)
            os << "      " << lines[i] << (i + 1 < lines.size() ? "," : "") << "\n";
        os << "    ]" << (++count < s.relations.size() ? "," : "") << "\n";
    }
    os << "  }\n";
    os << "}\n";
    return os.str();
}

std::string serialize_metrics(const Metrics& m) {
    std::ostringstream os;
    os << "{\n";
    os << "  \"kind\": \"metrics\",\n";
    os << "  \"out\": " << m.out << ",\n";
    os << "  \"shoc\": " << m.shoc << ",\n";
    os << "  \"shoc_per_pair\": {";
    std::map<Symbol, std::vector<std::pair<Symbol, std::size_t>>> grouped;
    for (const auto& [key, val] : m.shoc_per_pair) grouped[key.first].emplace_back(key.second, val);
    std::size_t count = 0;
    for (const auto& [atom, entries] : grouped) {
        os << (count++ ? ", " : "") << quote(atom) << ": {";
        for (std::size_t i = 0; i < entries.size(); ++i)
            os << (i ? ", " : "") << quote(entries[i].first) << ": " << entries[i].second;
        os << "}";
    }
    os << "}\n";
    os << "}\n";
    return os.str();
}

std::string serialize_equivalence(const EquivalenceResult& e) {
    std::ostringstream os;
    os << "{\n";
    os << "  \"kind\": \"equivalence\",\n";
    os << "  \"equivalent\": " << (e.equivalent ? "true" : "false") << ",\n";
    os << "  \"reason\": " << quote(e.reason) << "\n";
    os << "}\n";
    return os.str();
}

bool well_formed_document(std::string_view text, std::string* kind) {
    try {
        JsonValue root = JsonReader(text).parse();
        if (root.type != JsonValue::Type::object) return false;
        const JsonValue* k = root.find("kind");
        if (!k || k->type != JsonValue::Type::string) return false;
        if (kind) *kind = k->str;
        return true;
    } catch (const JsonError&) {
        return false;
    }
}

// ---------------------------------------------------------------------------
// Graph exports.
// ---------------------------------------------------------------------------

namespace {

std::string marking_text(const Marking& m) {
    std::ostringstream os;
    bool first_agent = true;
    for (const auto& [agent, atoms] : m.ready) {
        if (!first_agent) os << ' ';
        first_agent = false;
        os << agent << "={";
        bool first = true;
        for (const auto& a : atoms) {
            if (!first) os << ',';
            first = false;
            os << a;
        }
        os << '}';
    }
    return os.str();
}

} // namespace

std::string reach_to_text(const ReachabilityGraph& g, const Negotiation&) {
    std::ostringstream os;
    os << "reachability-graph\n";
    os << "vertices " << g.vertices.size() << "\n";
    os << "edges " << g.edges.size() << "\n";
    os << "initial " << g.initial << "\n";
    if (g.final)
        os << "final " << *g.final << "\n";
    else
        os << "final -\n";
    for (std::size_t v = 0; v < g.vertices.size(); ++v)
        os << "vertex " << v << ' ' << marking_text(g.vertices[v]) << "\n";
    for (const auto& e : g.edges)
        os << "edge " << e.from << ' ' << e.to << ' ' << e.atom << ' ' << e.outcome << "\n";
    return os.str();
}

std::string reach_to_dot(const ReachabilityGraph& g, const Negotiation&) {
    auto escape = [](const std::string& s) {
        std::string out;
        for (char c : s) {
            if (c == '"' || c == '\\') out += '\\';
            out += c;
        }
        return out;
    };
    std::ostringstream os;
    os << "digraph reachability {\n";
    os << "  rankdir=LR;\n";
    for (std::size_t v = 0; v < g.vertices.size(); ++v) {
        os << "  v" << v << " [shape=box, label=\"" << escape(marking_text(g.vertices[v]))
           << "\"";
        if (v == g.initial) os << ", style=bold";
        if (g.final && v == *g.final) os << ", peripheries=2";
        os << "];\n";
    }
    for (const auto& e : g.edges)
        os << "  v" << e.from << " -> v" << e.to << " [label=\"(" << escape(e.atom) << ","
           << escape(e.outcome) << ")\"];\n";
    os << "}\n";
    return os.str();
}

} // namespace neg

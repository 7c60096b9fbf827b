// ============================================================================
// famcheck/model_io.hpp — the line-oriented family-model text format
// ============================================================================
//
// Example (the vending machine):
//
//   features: c f;
//   configs: -- c- -f cf;
//   states: s0* s1 s2;
//   labels: s2: r;
//   trans: s0 -pay[!f]-> s1; s0 -free[f]-> s2; s1 -drink-> s2;
//          s1 -cancel[c]-> s0; s2 -take-> s0;
//
// Sections may appear once each, in the order above. A config token has one
// character per feature, '-' meaning absent; `configs: all;` is 2^F. A '*'
// marks an initial state. A missing guard is `true`; guards use
// `! & | ( ) true false` over declared features. `#` starts a line comment.
//
// Duplicate (source, action, target) transitions are merged by disjoining
// their guards. Loading validates the result, including totality of the full
// transition relation.
//
// ============================================================================

#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "famcheck/errors.hpp"
#include "famcheck/models.hpp"

namespace famcheck {

namespace detail {

class ModelScanner {
public:
    explicit ModelScanner(std::string_view text) : text_(text) {}

    int line() const { return line_; }
    int column() const { return column_; }

    void skip_space() {
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') bump();
            } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                bump();
            } else {
                break;
            }
        }
    }

    bool eof() {
        skip_space();
        return pos_ >= text_.size();
    }

    char peek() {
        skip_space();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    char peek_raw() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

    void expect(char c) {
        skip_space();
        if (pos_ >= text_.size() || text_[pos_] != c)
            throw ParseError(std::string("expected '") + c + "'", line_, column_);
        bump();
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            bump();
            return true;
        }
        return false;
    }

    static bool ident_char(char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
               c == '_';
    }

    std::string ident(const char* what) {
        skip_space();
        std::string out;
        while (pos_ < text_.size() && ident_char(text_[pos_])) {
            out += text_[pos_];
            bump();
        }
        if (out.empty())
            throw ParseError(std::string("expected ") + what, line_, column_);
        return out;
    }

    // A run of anything except whitespace and ';' (config tokens).
    std::string raw_token() {
        skip_space();
        std::string out;
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == ';' || c == '#')
                break;
            out += c;
            bump();
        }
        return out;
    }

    // Next identifier without consuming it.
    std::string peek_ident() {
        const std::size_t pos = pos_;
        const int line = line_, column = column_;
        skip_space();
        std::string out;
        while (pos_ < text_.size() && ident_char(text_[pos_])) {
            out += text_[pos_];
            bump();
        }
        pos_ = pos;
        line_ = line;
        column_ = column;
        return out;
    }

private:
    void bump() {
        if (text_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;
};

inline bool is_section_keyword(const std::string& w) {
    return w == "features" || w == "configs" || w == "states" || w == "labels" ||
           w == "trans";
}

inline std::vector<std::string> feature_names(const ConfigSpace& space) {
    std::vector<std::string> out;
    out.reserve(space.features().size());
    for (const Feature& f : space.features()) out.push_back(f.name);
    return out;
}

// Guard grammar: or over and over unary over atom.
class GuardParser {
public:
    GuardParser(ModelScanner& sc, const ConfigSpace& space) : sc_(sc), space_(space) {}

    FeatExpr parse() { return parse_or(); }

private:
    FeatExpr parse_or() {
        FeatExpr acc = parse_and();
        while (sc_.accept('|')) acc = FeatExpr::disj(acc, parse_and());
        return acc;
    }

    FeatExpr parse_and() {
        FeatExpr acc = parse_unary();
        while (sc_.accept('&')) acc = FeatExpr::conj(acc, parse_unary());
        return acc;
    }

    FeatExpr parse_unary() {
        if (sc_.accept('!')) return FeatExpr::neg(parse_unary());
        if (sc_.accept('(')) {
            FeatExpr e = parse_or();
            sc_.expect(')');
            return e;
        }
        const int line = sc_.line(), col = sc_.column();
        const std::string w = sc_.ident("a feature name");
        if (w == "true") return FeatExpr::tt();
        if (w == "false") return FeatExpr::ff();
        const int id = space_.find_feature(w);
        if (id < 0) throw ParseError("unknown feature '" + w + "'", line, col);
        return FeatExpr::var(id);
    }

    ModelScanner& sc_;
    const ConfigSpace& space_;
};

}  // namespace detail

inline Fts parse_model(std::string_view text) {
    detail::ModelScanner sc(text);
    Fts fts;
    bool have_features = false, have_configs = false, have_states = false;

    // Map-backed lookups; the member helpers on Ts are linear and would make
    // loading large generated models quadratic.
    std::unordered_map<std::string, int> state_ids;
    auto lookup_state = [&](const std::string& name) {
        auto it = state_ids.find(name);
        return it == state_ids.end() ? -1 : it->second;
    };
    std::unordered_map<std::uint64_t, std::size_t> triple_index;
    auto transition_key = [](int src, int action, int dst) {
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(src)) << 42) |
               (static_cast<std::uint64_t>(static_cast<std::uint32_t>(action)) << 21) |
               static_cast<std::uint64_t>(static_cast<std::uint32_t>(dst));
    };

    while (!sc.eof()) {
        const int line = sc.line(), col = sc.column();
        const std::string section = sc.ident("a section keyword");
        if (!detail::is_section_keyword(section))
            throw ParseError("unknown section '" + section + "'", line, col);
        sc.expect(':');

        if (section == "features") {
            std::vector<std::string> names;
            while (sc.peek() != ';') names.push_back(sc.ident("a feature name"));
            sc.expect(';');
            fts.space = ConfigSpace::from_names(names, {});
            have_features = true;
        } else if (section == "configs") {
            if (!have_features)
                throw ParseError("configs section before features", line, col);
            const std::size_t nfeat = fts.space.features().size();
            std::vector<Config> configs;
            bool all = false;
            while (sc.peek() != ';') {
                const int tline = sc.line(), tcol = sc.column();
                const std::string tok = sc.raw_token();
                if (tok == "all") {
                    all = true;
                    continue;
                }
                if (tok.size() != nfeat)
                    throw ParseError("config token '" + tok + "' needs one symbol per feature",
                                     tline, tcol);
                Config k;
                for (std::size_t i = 0; i < tok.size(); ++i)
                    if (tok[i] != '-') k.bits |= (1u << i);
                configs.push_back(k);
            }
            sc.expect(';');
            fts.space = all ? ConfigSpace::full(detail::feature_names(fts.space))
                            : fts.space.with_configs(std::move(configs));
            have_configs = true;
        } else if (section == "states") {
            while (sc.peek() != ';') {
                const int sline = sc.line(), scol = sc.column();
                const std::string name = sc.ident("a state name");
                if (state_ids.count(name))
                    throw ParseError("duplicate state '" + name + "'", sline, scol);
                const int id = static_cast<int>(fts.core.states.size());
                fts.core.states.push_back(name);
                fts.core.labels.emplace_back();
                state_ids.emplace(name, id);
                if (sc.accept('*')) fts.core.mark_initial(id);
            }
            sc.expect(';');
            have_states = true;
        } else if (section == "labels") {
            if (!have_states) throw ParseError("labels section before states", line, col);
            while (!sc.eof() && !detail::is_section_keyword(sc.peek_ident())) {
                const int sline = sc.line(), scol = sc.column();
                const std::string word = sc.ident("a state name");
                const int state = lookup_state(word);
                if (state < 0)
                    throw ParseError("unknown state '" + word + "'", sline, scol);
                sc.expect(':');
                while (sc.peek() != ';') {
                    const std::string prop = sc.ident("a proposition");
                    fts.core.add_label(state, fts.core.add_prop(prop));
                }
                sc.expect(';');
            }
        } else {  // trans
            if (!have_states) throw ParseError("trans section before states", line, col);
            if (!have_configs) throw ParseError("trans section before configs", line, col);
            while (!sc.eof() && !detail::is_section_keyword(sc.peek_ident())) {
                const int sline = sc.line(), scol = sc.column();
                const std::string word = sc.ident("a state name");
                const int src = lookup_state(word);
                if (src < 0) throw ParseError("unknown state '" + word + "'", sline, scol);
                sc.expect('-');
                const std::string action = sc.ident("an action name");
                FeatExpr guard = FeatExpr::tt();
                if (sc.accept('[')) {
                    guard = detail::GuardParser(sc, fts.space).parse();
                    sc.expect(']');
                }
                sc.expect('-');
                sc.expect('>');
                const int dline = sc.line(), dcol = sc.column();
                const std::string dst_name = sc.ident("a state name");
                const int dst = lookup_state(dst_name);
                if (dst < 0)
                    throw ParseError("unknown state '" + dst_name + "'", dline, dcol);
                sc.expect(';');
                const int act = fts.core.add_action(action);
                const std::uint64_t key = transition_key(src, act, dst);
                auto it = triple_index.find(key);
                if (it != triple_index.end()) {
                    fts.guards[it->second] = FeatExpr::disj(fts.guards[it->second], guard);
                } else {
                    triple_index.emplace(key, fts.core.transitions.size());
                    fts.core.transitions.push_back(Transition{src, act, dst});
                    fts.guards.push_back(std::move(guard));
                }
            }
        }
    }

    if (!have_features || !have_configs || !have_states)
        throw ParseError("model needs features, configs and states sections", sc.line(),
                         sc.column());
    try {
        validate(fts);
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what(), sc.line(), sc.column());
    }
    return fts;
}

inline Fts load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open model file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_model(buf.str());
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what(), e.line(), e.column());
    }
}

inline std::string save_model(const Fts& fts) {
    std::ostringstream os;
    os << "features:";
    for (const Feature& f : fts.space.features()) os << " " << f.name;
    os << ";\n";

    os << "configs:";
    if (fts.space.features().empty()) {
        // A feature-less family has the single empty configuration; there is
        // no explicit token for it.
        os << " all";
    } else {
        for (Config k : fts.space.configs()) {
            os << " ";
            for (const Feature& f : fts.space.features())
                os << (k.has(f.id) ? f.name.front() : '-');
        }
    }
    os << ";\n";

    os << "states:";
    for (std::size_t s = 0; s < fts.core.states.size(); ++s) {
        os << " " << fts.core.states[s];
        if (fts.core.is_initial(static_cast<int>(s))) os << "*";
    }
    os << ";\n";

    bool any_label = false;
    for (const auto& set : fts.core.labels) any_label |= !set.empty();
    if (any_label) {
        os << "labels:";
        for (std::size_t s = 0; s < fts.core.states.size(); ++s) {
            if (fts.core.labels[s].empty()) continue;
            os << " " << fts.core.states[s] << ":";
            for (int p : fts.core.labels[s])
                os << " " << fts.core.props[static_cast<std::size_t>(p)];
            os << ";";
        }
        os << "\n";
    }

    os << "trans:";
    for (std::size_t i = 0; i < fts.core.transitions.size(); ++i) {
        const Transition& t = fts.core.transitions[i];
        os << " " << fts.core.states[static_cast<std::size_t>(t.src)] << " -"
           << fts.core.actions[static_cast<std::size_t>(t.action)];
        if (fts.guards[i].kind() != FeatExpr::Kind::True)
            os << "[" << to_string(fts.guards[i], fts.space.features()) << "]";
        os << "-> " << fts.core.states[static_cast<std::size_t>(t.dst)] << ";";
    }
    os << "\n";
    return os.str();
}

}  // namespace famcheck

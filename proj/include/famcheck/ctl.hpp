// ============================================================================
// famcheck/ctl.hpp — CTL formulas in negation normal form
// ============================================================================
//
// Formulas are interned in a Formulas arena: structurally identical formulas
// share one FormulaId, so equality is id comparison and game-board nodes can
// key on (state id, formula id).
//
// The AST is NNF by construction — there is no negation node; negation exists
// only as literal polarity. The parser accepts '!' anywhere and pushes it
// inward through the standard dualities.
//
// The closure sub(Φ) is the formula dimension of the game board. An
// until/release formula contributes its four expansion forms:
//
//   A(p U q)  ~>  A(p U q),  q | (p & AX A(p U q)),  p & AX A(p U q),  AX A(p U q)
//   E(p V q)  ~>  E(p V q),  q & (p | EX E(p V q)),  p | EX E(p V q),  EX E(p V q)
//
// and symmetrically for the other quantifier.
//
// Surface grammar (this is also what to_string produces):
//
//   phi ::= "true" | "false" | ident | "!" phi | phi "&" phi | phi "|" phi
//         | ("A"|"E") "[" phi ("U"|"V") phi "]"
//         | ("AX"|"EX"|"AF"|"EF"|"AG"|"EG") phi
//         | "(" phi ")"
//
// '&' binds tighter than '|'; parentheses may replace the brackets. Sugar:
// AF p = A[true U p], EF p = E[true U p], AG p = A[false V p],
// EG p = E[false V p].
//
// ============================================================================

#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "famcheck/errors.hpp"

namespace famcheck {

// ── FormulaId ───────────────────────────────────────────────────────────────

using FormulaId = std::uint32_t;
inline constexpr FormulaId kNoFormula = static_cast<FormulaId>(-1);

enum class FormulaKind : std::uint8_t {
    True,
    False,
    Lit,       // atom or negated atom
    And,
    Or,
    ANext,
    ENext,
    AUntil,
    EUntil,
    ARelease,
    ERelease,
};

inline bool is_until(FormulaKind k) {
    return k == FormulaKind::AUntil || k == FormulaKind::EUntil;
}
inline bool is_release(FormulaKind k) {
    return k == FormulaKind::ARelease || k == FormulaKind::ERelease;
}
inline bool is_until_or_release(FormulaKind k) { return is_until(k) || is_release(k); }

struct FormulaNode {
    FormulaKind kind{};
    bool negated = false;   // literal polarity, Lit only
    std::string atom;       // Lit only
    FormulaId lhs = kNoFormula;
    FormulaId rhs = kNoFormula;

    bool operator==(const FormulaNode& o) const {
        return kind == o.kind && negated == o.negated && atom == o.atom &&
               lhs == o.lhs && rhs == o.rhs;
    }
};

struct FormulaNodeHash {
    std::size_t operator()(const FormulaNode& n) const {
        std::size_t h = std::hash<std::string>()(n.atom);
        h = h * 1000003u + static_cast<std::size_t>(n.kind) * 2u + (n.negated ? 1u : 0u);
        h = h * 1000003u + n.lhs;
        h = h * 1000003u + n.rhs;
        return h;
    }
};

// ── Formulas arena ──────────────────────────────────────────────────────────

class Formulas {
public:
    FormulaId tt() { return intern({FormulaKind::True, false, "", kNoFormula, kNoFormula}); }
    FormulaId ff() { return intern({FormulaKind::False, false, "", kNoFormula, kNoFormula}); }
    FormulaId lit(std::string atom, bool negated = false) {
        return intern({FormulaKind::Lit, negated, std::move(atom), kNoFormula, kNoFormula});
    }
    FormulaId conj(FormulaId a, FormulaId b) {
        return intern({FormulaKind::And, false, "", a, b});
    }
    FormulaId disj(FormulaId a, FormulaId b) {
        return intern({FormulaKind::Or, false, "", a, b});
    }
    FormulaId a_next(FormulaId a) { return intern({FormulaKind::ANext, false, "", a, kNoFormula}); }
    FormulaId e_next(FormulaId a) { return intern({FormulaKind::ENext, false, "", a, kNoFormula}); }
    FormulaId a_until(FormulaId a, FormulaId b) {
        return intern({FormulaKind::AUntil, false, "", a, b});
    }
    FormulaId e_until(FormulaId a, FormulaId b) {
        return intern({FormulaKind::EUntil, false, "", a, b});
    }
    FormulaId a_release(FormulaId a, FormulaId b) {
        return intern({FormulaKind::ARelease, false, "", a, b});
    }
    FormulaId e_release(FormulaId a, FormulaId b) {
        return intern({FormulaKind::ERelease, false, "", a, b});
    }

    const FormulaNode& node(FormulaId id) const { return nodes_.at(id); }
    std::size_t size() const { return nodes_.size(); }

    // NNF negation via the dualities; the result never contains a negation
    // node.
    FormulaId negate(FormulaId id) {
        const FormulaNode n = node(id);
        switch (n.kind) {
            case FormulaKind::True: return ff();
            case FormulaKind::False: return tt();
            case FormulaKind::Lit: return lit(n.atom, !n.negated);
            case FormulaKind::And: return disj(negate(n.lhs), negate(n.rhs));
            case FormulaKind::Or: return conj(negate(n.lhs), negate(n.rhs));
            case FormulaKind::ANext: return e_next(negate(n.lhs));
            case FormulaKind::ENext: return a_next(negate(n.lhs));
            case FormulaKind::AUntil: return e_release(negate(n.lhs), negate(n.rhs));
            case FormulaKind::EUntil: return a_release(negate(n.lhs), negate(n.rhs));
            case FormulaKind::ARelease: return e_until(negate(n.lhs), negate(n.rhs));
            case FormulaKind::ERelease: return a_until(negate(n.lhs), negate(n.rhs));
        }
        throw std::logic_error("negate: bad formula kind");
    }

    std::string to_string(FormulaId id) const {
        std::string out;
        print(out, id, 0);
        return out;
    }

private:
    FormulaId intern(FormulaNode n) {
        auto it = index_.find(n);
        if (it != index_.end()) return it->second;
        const FormulaId id = static_cast<FormulaId>(nodes_.size());
        nodes_.push_back(n);
        index_.emplace(std::move(n), id);
        return id;
    }

    // precedence: atoms/quantified = 4, prefix = 3, & = 2, | = 1
    void print(std::string& out, FormulaId id, int parent_prec) const {
        const FormulaNode& n = node(id);
        switch (n.kind) {
            case FormulaKind::True: out += "true"; return;
            case FormulaKind::False: out += "false"; return;
            case FormulaKind::Lit:
                if (n.negated) out += "!";
                out += n.atom;
                return;
            case FormulaKind::And: {
                const bool paren = parent_prec > 2;
                if (paren) out += "(";
                print(out, n.lhs, 2);
                out += " & ";
                // Right operands of equal precedence keep their parentheses
                // so reparsing rebuilds the identical tree.
                print(out, n.rhs, 3);
                if (paren) out += ")";
                return;
            }
            case FormulaKind::Or: {
                const bool paren = parent_prec > 1;
                if (paren) out += "(";
                print(out, n.lhs, 1);
                out += " | ";
                print(out, n.rhs, 2);
                if (paren) out += ")";
                return;
            }
            case FormulaKind::ANext:
            case FormulaKind::ENext: {
                const bool paren = parent_prec > 3;
                if (paren) out += "(";
                out += n.kind == FormulaKind::ANext ? "AX " : "EX ";
                print(out, n.lhs, 3);
                if (paren) out += ")";
                return;
            }
            case FormulaKind::AUntil:
            case FormulaKind::EUntil:
            case FormulaKind::ARelease:
            case FormulaKind::ERelease: {
                out += (n.kind == FormulaKind::AUntil || n.kind == FormulaKind::ARelease)
                           ? "A ["
                           : "E [";
                print(out, n.lhs, 0);
                out += is_until(n.kind) ? " U " : " V ";
                print(out, n.rhs, 0);
                out += "]";
                return;
            }
        }
    }

    std::vector<FormulaNode> nodes_;
    std::unordered_map<FormulaNode, FormulaId, FormulaNodeHash> index_;
};

// ── Expansion ───────────────────────────────────────────────────────────────

// One-step unfolding of an until/release formula: the disjunctive form for U,
// the conjunctive form for V.
inline FormulaId expand(Formulas& fs, FormulaId id) {
    const FormulaNode n = fs.node(id);
    switch (n.kind) {
        case FormulaKind::AUntil:
            return fs.disj(n.rhs, fs.conj(n.lhs, fs.a_next(id)));
        case FormulaKind::EUntil:
            return fs.disj(n.rhs, fs.conj(n.lhs, fs.e_next(id)));
        case FormulaKind::ARelease:
            return fs.conj(n.rhs, fs.disj(n.lhs, fs.a_next(id)));
        case FormulaKind::ERelease:
            return fs.conj(n.rhs, fs.disj(n.lhs, fs.e_next(id)));
        default:
            throw std::invalid_argument("expand: formula is not an until/release");
    }
}

// ── Closure ─────────────────────────────────────────────────────────────────

// sub(Φ): the least formula set closed under subformulas and expansions.
// Members keep first-discovery order, which is deterministic per arena.
struct Closure {
    std::vector<FormulaId> members;

    bool contains(FormulaId id) const {
        for (FormulaId m : members)
            if (m == id) return true;
        return false;
    }
    std::size_t size() const { return members.size(); }
};

inline Closure sub_closure(Formulas& fs, FormulaId phi) {
    Closure out;
    std::unordered_set<FormulaId> seen;
    std::vector<FormulaId> work{phi};
    while (!work.empty()) {
        const FormulaId id = work.back();
        work.pop_back();
        if (!seen.insert(id).second) continue;
        out.members.push_back(id);
        const FormulaNode n = fs.node(id);
        switch (n.kind) {
            case FormulaKind::True:
            case FormulaKind::False:
            case FormulaKind::Lit:
                break;
            case FormulaKind::And:
            case FormulaKind::Or:
                work.push_back(n.rhs);
                work.push_back(n.lhs);
                break;
            case FormulaKind::ANext:
            case FormulaKind::ENext:
                work.push_back(n.lhs);
                break;
            case FormulaKind::AUntil:
            case FormulaKind::EUntil:
            case FormulaKind::ARelease:
            case FormulaKind::ERelease:
                // exp(Φ) contributes the unfolding chain; operands follow.
                work.push_back(n.rhs);
                work.push_back(n.lhs);
                work.push_back(expand(fs, id));
                break;
        }
    }
    return out;
}

// ── Parser ──────────────────────────────────────────────────────────────────

namespace detail {

struct CtlToken {
    enum class Type { Ident, Not, And, Or, LParen, RParen, LBracket, RBracket, End };
    Type type = Type::End;
    std::string text;
    int line = 1;
    int column = 1;
};

class CtlLexer {
public:
    explicit CtlLexer(std::string_view text) : text_(text) { advance(); }

    const CtlToken& peek() const { return tok_; }

    CtlToken take() {
        CtlToken t = tok_;
        advance();
        return t;
    }

private:
    static bool ident_start(char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
    }
    static bool ident_cont(char c) {
        return ident_start(c) || (c >= '0' && c <= '9') || c == '<' || c == '>' ||
               c == '=' || c == '.';
    }

    void advance() {
        while (pos_ < text_.size() &&
               (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' ||
                text_[pos_] == '\r')) {
            bump(text_[pos_]);
            ++pos_;
        }
        tok_ = CtlToken{};
        tok_.line = line_;
        tok_.column = column_;
        if (pos_ >= text_.size()) {
            tok_.type = CtlToken::Type::End;
            return;
        }
        const char c = text_[pos_];
        switch (c) {
            case '!': tok_.type = CtlToken::Type::Not; break;
            case '&': tok_.type = CtlToken::Type::And; break;
            case '|': tok_.type = CtlToken::Type::Or; break;
            case '(': tok_.type = CtlToken::Type::LParen; break;
            case ')': tok_.type = CtlToken::Type::RParen; break;
            case '[': tok_.type = CtlToken::Type::LBracket; break;
            case ']': tok_.type = CtlToken::Type::RBracket; break;
            default:
                if (!ident_start(c))
                    throw ParseError(std::string("unexpected character '") + c + "'", line_,
                                     column_);
                tok_.type = CtlToken::Type::Ident;
                while (pos_ < text_.size() && ident_cont(text_[pos_])) {
                    tok_.text += text_[pos_];
                    bump(text_[pos_]);
                    ++pos_;
                }
                return;
        }
        tok_.text = c;
        bump(c);
        ++pos_;
    }

    void bump(char c) {
        if (c == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;
    CtlToken tok_;
};

// The parser builds NNF directly by threading polarity; '&'/'|' and the
// temporal operators dualize under negation.
class CtlParser {
public:
    CtlParser(std::string_view text, Formulas& fs) : lex_(text), fs_(fs) {}

    FormulaId parse() {
        const FormulaId id = parse_or(false);
        const CtlToken& t = lex_.peek();
        if (t.type != CtlToken::Type::End)
            throw ParseError("unexpected trailing input", t.line, t.column);
        return id;
    }

private:
    FormulaId parse_or(bool neg) {
        FormulaId acc = parse_and(neg);
        while (lex_.peek().type == CtlToken::Type::Or) {
            lex_.take();
            const FormulaId rhs = parse_and(neg);
            acc = neg ? fs_.conj(acc, rhs) : fs_.disj(acc, rhs);
        }
        return acc;
    }

    FormulaId parse_and(bool neg) {
        FormulaId acc = parse_unary(neg);
        while (lex_.peek().type == CtlToken::Type::And) {
            lex_.take();
            const FormulaId rhs = parse_unary(neg);
            acc = neg ? fs_.disj(acc, rhs) : fs_.conj(acc, rhs);
        }
        return acc;
    }

    FormulaId parse_unary(bool neg) {
        const CtlToken& t = lex_.peek();
        if (t.type == CtlToken::Type::Not) {
            lex_.take();
            return parse_unary(!neg);
        }
        return parse_primary(neg);
    }

    FormulaId parse_primary(bool neg) {
        CtlToken t = lex_.take();
        switch (t.type) {
            case CtlToken::Type::LParen: {
                const FormulaId id = parse_or(neg);
                expect(CtlToken::Type::RParen, ")");
                return id;
            }
            case CtlToken::Type::Ident:
                return parse_ident(std::move(t), neg);
            default:
                throw ParseError("expected a formula", t.line, t.column);
        }
    }

    FormulaId parse_ident(CtlToken t, bool neg) {
        const std::string& w = t.text;
        if (w == "true") return neg ? fs_.ff() : fs_.tt();
        if (w == "false") return neg ? fs_.tt() : fs_.ff();
        if (w == "AX" || w == "EX") {
            const bool univ = (w == "AX") != neg;  // !AX p == EX !p
            const FormulaId body = parse_unary(neg);
            return univ ? fs_.a_next(body) : fs_.e_next(body);
        }
        if (w == "AF" || w == "EF") {
            // AF p = A[true U p]; !AF p = E[false V !p]
            const bool univ = (w == "AF") != neg;
            const FormulaId body = parse_unary(neg);
            if (!neg) return univ ? fs_.a_until(fs_.tt(), body) : fs_.e_until(fs_.tt(), body);
            return univ ? fs_.a_release(fs_.ff(), body) : fs_.e_release(fs_.ff(), body);
        }
        if (w == "AG" || w == "EG") {
            // AG p = A[false V p]; !AG p = E[true U !p]
            const bool univ = (w == "AG") != neg;
            const FormulaId body = parse_unary(neg);
            if (!neg) return univ ? fs_.a_release(fs_.ff(), body) : fs_.e_release(fs_.ff(), body);
            return univ ? fs_.a_until(fs_.tt(), body) : fs_.e_until(fs_.tt(), body);
        }
        if ((w == "A" || w == "E") &&
            (lex_.peek().type == CtlToken::Type::LBracket ||
             lex_.peek().type == CtlToken::Type::LParen)) {
            return parse_path(w == "A", neg);
        }
        return fs_.lit(w, neg);
    }

    // ("A"|"E") ("["|"(") phi ("U"|"V") phi ("]"|")")
    FormulaId parse_path(bool univ, bool neg) {
        const CtlToken open = lex_.take();
        const bool bracket = open.type == CtlToken::Type::LBracket;
        const FormulaId lhs = parse_or(neg);
        CtlToken op = lex_.take();
        if (op.type != CtlToken::Type::Ident || (op.text != "U" && op.text != "V"))
            throw ParseError("expected 'U' or 'V' in a path formula", op.line, op.column);
        const FormulaId rhs = parse_or(neg);
        expect(bracket ? CtlToken::Type::RBracket : CtlToken::Type::RParen,
               bracket ? "]" : ")");
        const bool until = (op.text == "U") != neg;  // !(p U q) == !p V !q
        const bool q_univ = univ != neg;             // !A phi == E !phi
        if (until) return q_univ ? fs_.a_until(lhs, rhs) : fs_.e_until(lhs, rhs);
        return q_univ ? fs_.a_release(lhs, rhs) : fs_.e_release(lhs, rhs);
    }

    void expect(CtlToken::Type type, const std::string& what) {
        const CtlToken t = lex_.take();
        if (t.type != type) throw ParseError("expected '" + what + "'", t.line, t.column);
    }

    CtlLexer lex_;
    Formulas& fs_;
};

}  // namespace detail

// Parses the surface grammar into the arena; the result is in NNF. Throws
// ParseError with a 1-based position on malformed input.
inline FormulaId parse_formula(std::string_view text, Formulas& fs) {
    return detail::CtlParser(text, fs).parse();
}

}  // namespace famcheck

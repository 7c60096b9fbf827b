// ============================================================================
// famcheck/oracle.hpp — reference CTL checker
// ============================================================================
//
// Brute-force ground truth for tests and the `oracle` CLI command: standard
// two-valued CTL on a single total transition system via bottom-up fixpoint
// labeling, and family checking by exhaustive projection. Never used by the
// verification pipeline itself.
//
//   EU / AU — least fixpoints
//   EV / AV — greatest fixpoints
//   AX / EX — one-step image over the successor relation
//
// Totality is required so that the universal one-step operator matches the
// infinite-execution path semantics.
//
// ============================================================================

#pragma once

#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "famcheck/ctl.hpp"
#include "famcheck/models.hpp"

namespace famcheck {

namespace detail {

class TsChecker {
public:
    TsChecker(const Ts& ts, const Formulas& fs) : ts_(ts), fs_(fs) {
        succ_.resize(ts.states.size());
        for (const Transition& t : ts.transitions)
            succ_[static_cast<std::size_t>(t.src)].push_back(t.dst);
    }

    const std::vector<char>& sat(FormulaId id) {
        auto it = memo_.find(id);
        if (it != memo_.end()) return it->second;
        return memo_.emplace(id, compute(id)).first->second;
    }

private:
    std::size_t state_count() const { return ts_.states.size(); }

    std::vector<char> all_next(const std::vector<char>& set) const {
        std::vector<char> out(state_count(), 0);
        for (std::size_t s = 0; s < state_count(); ++s) {
            bool all = true;
            for (int d : succ_[s])
                if (!set[static_cast<std::size_t>(d)]) {
                    all = false;
                    break;
                }
            out[s] = all ? 1 : 0;
        }
        return out;
    }

    std::vector<char> some_next(const std::vector<char>& set) const {
        std::vector<char> out(state_count(), 0);
        for (std::size_t s = 0; s < state_count(); ++s)
            for (int d : succ_[s])
                if (set[static_cast<std::size_t>(d)]) {
                    out[s] = 1;
                    break;
                }
        return out;
    }

    template <typename Step>
    std::vector<char> fixpoint(std::vector<char> current, Step step) const {
        // Monotone iteration stabilizes within |S| rounds.
        for (std::size_t round = 0; round <= state_count(); ++round) {
            std::vector<char> next = step(current);
            if (next == current) return current;
            current = std::move(next);
        }
        throw std::logic_error("oracle fixpoint failed to stabilize within |S| rounds");
    }

    std::vector<char> compute(FormulaId id) {
        const FormulaNode& n = fs_.node(id);
        const std::size_t ns = state_count();
        switch (n.kind) {
            case FormulaKind::True: return std::vector<char>(ns, 1);
            case FormulaKind::False: return std::vector<char>(ns, 0);
            case FormulaKind::Lit: {
                std::vector<char> out(ns, 0);
                int prop = -1;
                for (std::size_t p = 0; p < ts_.props.size(); ++p)
                    if (ts_.props[p] == n.atom) prop = static_cast<int>(p);
                for (std::size_t s = 0; s < ns; ++s) {
                    const bool holds = prop >= 0 && ts_.has_label(static_cast<int>(s), prop);
                    out[s] = (holds != n.negated) ? 1 : 0;
                }
                return out;
            }
            case FormulaKind::And: {
                const std::vector<char> a = sat(n.lhs), b = sat(n.rhs);
                std::vector<char> out(ns, 0);
                for (std::size_t s = 0; s < ns; ++s) out[s] = a[s] && b[s];
                return out;
            }
            case FormulaKind::Or: {
                const std::vector<char> a = sat(n.lhs), b = sat(n.rhs);
                std::vector<char> out(ns, 0);
                for (std::size_t s = 0; s < ns; ++s) out[s] = a[s] || b[s];
                return out;
            }
            case FormulaKind::ANext: return all_next(sat(n.lhs));
            case FormulaKind::ENext: return some_next(sat(n.lhs));
            case FormulaKind::AUntil:
            case FormulaKind::EUntil: {
                const std::vector<char> p1 = sat(n.lhs), p2 = sat(n.rhs);
                const bool universal = n.kind == FormulaKind::AUntil;
                return fixpoint(std::vector<char>(ns, 0), [&](const std::vector<char>& x) {
                    const std::vector<char> pre = universal ? all_next(x) : some_next(x);
                    std::vector<char> next(ns, 0);
                    for (std::size_t s = 0; s < ns; ++s)
                        next[s] = p2[s] || (p1[s] && pre[s]);
                    return next;
                });
            }
            case FormulaKind::ARelease:
            case FormulaKind::ERelease: {
                const std::vector<char> p1 = sat(n.lhs), p2 = sat(n.rhs);
                const bool universal = n.kind == FormulaKind::ARelease;
                return fixpoint(std::vector<char>(ns, 1), [&](const std::vector<char>& x) {
                    const std::vector<char> pre = universal ? all_next(x) : some_next(x);
                    std::vector<char> next(ns, 0);
                    for (std::size_t s = 0; s < ns; ++s)
                        next[s] = p2[s] && (p1[s] || pre[s]);
                    return next;
                });
            }
        }
        throw std::logic_error("oracle: bad formula kind");
    }

    const Ts& ts_;
    const Formulas& fs_;
    std::vector<std::vector<int>> succ_;
    std::unordered_map<FormulaId, std::vector<char>> memo_;
};

}  // namespace detail

// True iff every initial state satisfies phi under the standard two-valued
// semantics. Requires a total transition relation.
inline bool check_ts(const Ts& ts, const Formulas& fs, FormulaId phi) {
    if (!ts.is_total()) {
        const std::vector<int> orphans = ts.childless_states();
        throw std::invalid_argument(
            "oracle requires a total transition relation; state '" +
            ts.states.at(static_cast<std::size_t>(orphans.front())) + "' has no successor");
    }
    detail::TsChecker checker(ts, fs);
    const std::vector<char>& set = checker.sat(phi);
    for (int s : ts.initial)
        if (!set[static_cast<std::size_t>(s)]) return false;
    return true;
}

// Per-variant verdicts by exhaustive projection, sorted by configuration bit
// pattern.
inline std::vector<std::pair<Config, bool>> check_variants(const Fts& fts,
                                                           const Formulas& fs,
                                                           FormulaId phi) {
    std::vector<std::pair<Config, bool>> out;
    out.reserve(fts.space.size());
    for (Config k : fts.space.configs()) {
        try {
            out.emplace_back(k, check_ts(project(fts, k), fs, phi));
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("variant " + fts.space.config_to_string(k) + ": " +
                                        e.what());
        }
    }
    return out;
}

}  // namespace famcheck

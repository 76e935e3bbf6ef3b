#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "frequencies.hpp"
#include "recognizability.hpp"
#include "substitution.hpp"
#include "words.hpp"

namespace substwords {

// Tagged union covering the ranges of all three colorings. Equality is
// structural; to_string() is the canonical serialization (also used as map key).
struct Color {
    enum class Tag { Literal, PrefSufPair, LetterSet, NonPrefix, SeedResidue, Plain1 };
    Tag tag = Tag::Plain1;
    std::string a, b;          // Literal: a = w. PrefSufPair: a = suf, b = pref. SeedResidue: a = v.
    std::string letters;       // LetterSet members, sorted
    long long residue = 0;     // SeedResidue: chain depth mod P

    static Color literal(std::string w) { return {Tag::Literal, std::move(w), "", "", 0}; }
    static Color pref_suf(std::string suf, std::string pref) {
        return {Tag::PrefSufPair, std::move(suf), std::move(pref), "", 0};
    }
    static Color letter_set(std::string sorted_letters) {
        return {Tag::LetterSet, "", "", std::move(sorted_letters), 0};
    }
    static Color non_prefix() { return {Tag::NonPrefix, "", "", "", 0}; }
    static Color seed_residue(std::string v, long long r) { return {Tag::SeedResidue, std::move(v), "", "", r}; }
    static Color plain1() { return {Tag::Plain1, "", "", "", 0}; }

    bool operator==(const Color&) const = default;

    std::string to_string() const {
        switch (tag) {
            case Tag::Literal: return "lit:" + a;
            case Tag::PrefSufPair: return "ps:" + a + "|" + b;
            case Tag::LetterSet: return "set:{" + letters + "}";
            case Tag::NonPrefix: return "nonprefix";
            case Tag::SeedResidue: return "seed:" + a + ":" + std::to_string(residue);
            case Tag::Plain1: return "plain1";
        }
        return "?";
    }
};

// ---------------------------------------------------------------------------
// Coloring A: constant length L, recognizability index K, injectivity radius r.

// Least r in [1, L] such that alpha -> zeta(alpha)[1..r] and
// alpha -> zeta(alpha)[r..L] are both injective on letters.
inline long long injectivity_radius(const Substitution& z) {
    auto Lopt = z.constant_length();
    if (!Lopt) throw Error("injectivity radius needs a constant length substitution");
    const long long L = *Lopt;
    const int n = z.alphabet().size();
    for (long long r = 1; r <= L; ++r) {
        bool ok = true;
        for (int i = 0; i < n && ok; ++i)
            for (int j = i + 1; j < n && ok; ++j) {
                const std::string& a = z.image_by_index(i);
                const std::string& b = z.image_by_index(j);
                if (a.compare(0, static_cast<std::size_t>(r), b, 0, static_cast<std::size_t>(r)) == 0) ok = false;
                if (a.compare(static_cast<std::size_t>(r - 1), std::string::npos, b,
                              static_cast<std::size_t>(r - 1), std::string::npos) == 0)
                    ok = false;
            }
        if (ok) return r;
    }
    throw NoRadius("no injectivity radius in [1, L]");
}

struct UniformColoringContext {
    FixedPointWindow window;
    long long L = 0;
    long long K = 0;
    long long r = 0;
    long long threshold = 0; // 2L + K
    CuttingBars bars;        // level 1, whole window
};

inline UniformColoringContext make_uniform_context(FixedPointWindow u, long long K,
                                                   std::optional<long long> r_override = std::nullopt) {
    auto Lopt = u.substitution().constant_length();
    if (!Lopt) throw Error("uniform coloring needs a constant length substitution");
    UniformColoringContext ctx{std::move(u), *Lopt, K, 0, 0, {}};
    ctx.r = r_override ? *r_override : injectivity_radius(ctx.window.substitution());
    if (ctx.r < 1 || ctx.r > ctx.L) throw NoRadius("radius outside [1, L]");
    ctx.threshold = 2 * ctx.L + K;
    ctx.bars = cutting_bars(ctx.window, 1, ctx.window.size() + 1);
    return ctx;
}

// Recursion depth is at most 2 per length division by L, plus slack for the
// initial rerouting steps.
namespace detail {

inline long long uniform_depth_bound(long long len, long long L) {
    long long d = 2;
    while (len > 1) {
        len /= L;
        d += 2;
    }
    return d + 2;
}

inline Color color_uniform_interval(const UniformColoringContext& ctx, Interval I, long long depth) {
    if (depth < 0) throw Error("uniform coloring recursion exceeded its depth bound");
    if (I.length() <= ctx.threshold) return Color::literal(std::string(ctx.window.segment(I)));
    auto d = decompose(ctx.window, I, 1, ctx.bars);
    long long s = static_cast<long long>(d.pref.size() + d.suf.size());
    if (s != 0 && s != ctx.L) return Color::pref_suf(d.suf, d.pref);
    if (s == 0) return color_uniform_interval(ctx, d.interior(), depth - 1);
    Interval tau = static_cast<long long>(d.suf.size()) >= ctx.r
                       ? Interval{d.m, d.succ() - 1}
                       : Interval{d.pred(), d.M - 1};
    return color_uniform_interval(ctx, tau, depth - 1);
}

} // namespace detail

inline Color color_uniform(const UniformColoringContext& ctx, std::string_view w) {
    if (w.empty()) throw EmptyWord();
    if (static_cast<long long>(w.size()) <= ctx.threshold) return Color::literal(std::string(w));
    auto occs = ctx.window.occurrences(w);
    if (occs.empty()) throw NotInLanguage(std::string(w));
    Interval I{occs[0], occs[0] + static_cast<long long>(w.size()) - 1};
    return detail::color_uniform_interval(ctx, I, detail::uniform_depth_bound(I.length(), ctx.L));
}

// Color the factor through a chosen occurrence (the well-definedness lemma says
// the choice must not matter; checkers exercise exactly this entry point).
inline Color color_uniform_at(const UniformColoringContext& ctx, Interval I) {
    if (I.length() < 1 || !I.valid()) throw EmptyWord();
    if (I.hi > ctx.window.size()) throw WindowExhausted("interval beyond window");
    return detail::color_uniform_interval(ctx, I, detail::uniform_depth_bound(I.length(), ctx.L));
}

// ---------------------------------------------------------------------------
// Coloring B: letters whose sliding frequency strictly exceeds d_alpha.

struct FrequencyColoringContext {
    Alphabet alphabet;
    FrequencyVector freqs;
};

inline FrequencyColoringContext make_frequency_context(const Substitution& z) {
    return {z.alphabet(), letter_frequencies(z)};
}

inline Color color_frequency(const FrequencyColoringContext& ctx, std::string_view w) {
    if (w.empty()) throw EmptyWord();
    auto counts = parikh(ctx.alphabet, w);
    std::string members;
    for (int i = 0; i < ctx.alphabet.size(); ++i) {
        Rat ratio(counts[static_cast<std::size_t>(i)], static_cast<long long>(w.size()));
        if (ctx.freqs.compare(i, ratio) < 0) members += ctx.alphabet.letter(i);
    }
    return Color::letter_set(std::move(members));
}

// ---------------------------------------------------------------------------
// Coloring C: seed-residue classes along the prefix desubstitution chain.

struct FactorizationColoringContext {
    FixedPointWindow window;
    long long K = 0;  // recognizability index at level 1
    long long L = 0;  // max image length at level 1
    long long k0 = 0; // 1 + max exponent among short powers
    long long q = 0;
    long long K_q = 0;
    long long L_q = 0;
    long long P = 0;
    long long threshold = 0; // 2L + K
    CuttingBars bars;        // level 1, whole window
};

inline FactorizationColoringContext
compute_factorization_constants(FixedPointWindow u, std::optional<long long> K_override = std::nullopt) {
    if (!is_primitive(u.substitution()).primitive)
        throw NotPrimitive("factorization coloring needs a primitive substitution");

    FactorizationColoringContext ctx{std::move(u), 0, 0, 0, 0, 0, 0, 0, 0, {}};
    const Substitution& z = ctx.window.substitution();
    ctx.K = K_override ? *K_override : estimate_recognizability_index(ctx.window, 1).K_hat;
    ctx.L = z.max_image_length();
    ctx.threshold = 2 * ctx.L + ctx.K;

    auto powers = max_power_exponents(ctx.window.view(), ctx.threshold);
    for (const auto& [w, e] : powers.table)
        if (e * static_cast<long long>(w.size()) * 2 >= ctx.window.size())
            throw Error("power-saturated window: '" + w + "' looks periodic");
    ctx.k0 = 1 + powers.global_max;

    const long long growth_target = ctx.k0 * (ctx.K + 2 * ctx.L);
    for (ctx.q = 1;; ++ctx.q) {
        auto lens = z.image_length_table(ctx.q);
        if (*std::min_element(lens.begin(), lens.end()) > growth_target) break;
        if (ctx.q > 64) throw Error("no growth level q found");
    }
    ctx.K_q = estimate_recognizability_index(ctx.window, ctx.q).K_hat;
    {
        auto lens = z.image_length_table(ctx.q);
        ctx.L_q = *std::max_element(lens.begin(), lens.end());
    }
    for (ctx.P = ctx.q + 1;; ++ctx.P) {
        auto lens = z.image_length_table(ctx.P);
        if (*std::min_element(lens.begin(), lens.end()) > 2 * ctx.L_q + ctx.K_q) break;
        if (ctx.P > 256) throw Error("no period level P found");
    }
    ctx.bars = cutting_bars(ctx.window, 1, ctx.window.size() + 1);
    return ctx;
}

// Color of the length-len prefix of the fixed point. Case order: short
// literal, then the first chain element landing at or below the threshold,
// then plain 1.
inline Color color_factorization_prefix(const FactorizationColoringContext& ctx, long long len) {
    if (len < 1) throw EmptyWord();
    if (len > ctx.window.size()) throw WindowExhausted("prefix longer than window");
    if (len <= ctx.threshold) return Color::literal(std::string(ctx.window.segment({1, len})));

    for (long long j = 1;; ++j) {
        auto q_idx = ctx.bars.least_geq(len + 1);
        if (!q_idx || ctx.bars.bars[*q_idx] != len + 1) return Color::plain1(); // prefix not 1-fitted
        len = static_cast<long long>(*q_idx); // interior of [1, len] is u[1 .. q]
        if (len <= ctx.threshold)
            return Color::seed_residue(std::string(ctx.window.segment({1, len})), j % ctx.P);
    }
}

inline Color color_factorization(const FactorizationColoringContext& ctx, std::string_view w) {
    if (w.empty()) throw EmptyWord();
    long long len = static_cast<long long>(w.size());
    if (len > ctx.window.size()) throw WindowExhausted("word longer than window");
    if (w != ctx.window.segment({1, len})) return Color::non_prefix();
    return color_factorization_prefix(ctx, len);
}

// ---------------------------------------------------------------------------
// Occurrence independence: colors computed through every occurrence of a factor
// must agree. `colorer` maps an occurrence interval to a color.

struct WellDefinedWitness {
    std::string word;
    Interval I, J;
    std::string color_I, color_J;
};

struct WellDefinedReport {
    long long factors_checked = 0;
    long long multi_occurrence_factors = 0;
    long long comparisons = 0;
    long long failures = 0;
    long long window_skips = 0; // occurrences whose color needs bars past the window
    bool pass = false;
    std::vector<WellDefinedWitness> witnesses;
};

inline WellDefinedReport
check_well_defined(const FixedPointWindow& u, long long max_len,
                   const std::function<Color(Interval)>& colorer,
                   long long per_word_occurrence_cap = 0) {
    WellDefinedReport rep;
    const long long W = u.size();
    for (long long len = 1; len <= max_len; ++len) {
        std::unordered_map<std::string_view, std::vector<long long>> occ;
        for (long long p = 1; p + len - 1 <= W; ++p)
            occ[u.segment({p, p + len - 1})].push_back(p);
        for (auto& [w, positions] : occ) {
            ++rep.factors_checked;
            if (positions.size() < 2) continue;
            ++rep.multi_occurrence_factors;
            long long cap = per_word_occurrence_cap > 0
                                ? std::min<long long>(per_word_occurrence_cap, static_cast<long long>(positions.size()))
                                : static_cast<long long>(positions.size());
            std::optional<Color> ref;
            for (long long i = 0; i < cap; ++i) {
                Interval J{positions[static_cast<std::size_t>(i)], positions[static_cast<std::size_t>(i)] + len - 1};
                Color c;
                try {
                    c = colorer(J);
                } catch (const WindowExhausted&) {
                    ++rep.window_skips;
                    continue;
                }
                if (!ref) {
                    ref = c;
                    continue;
                }
                ++rep.comparisons;
                if (!(c == *ref)) {
                    ++rep.failures;
                    if (rep.witnesses.size() < 10)
                        rep.witnesses.push_back({std::string(w),
                                                 {positions[0], positions[0] + len - 1},
                                                 J,
                                                 ref->to_string(),
                                                 c.to_string()});
                }
            }
        }
    }
    rep.pass = rep.failures == 0;
    return rep;
}

} // namespace substwords

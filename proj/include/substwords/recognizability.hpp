#pragma once

#include <algorithm>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "substitution.hpp"
#include "words.hpp"

namespace substwords {

// Bars of level k over a window: E_k = {1} union {|zeta^k(u[1..p])|+1}.
// bars[p] = |zeta^k(u[1..p])| + 1, so the vector index is the preimage index p.
struct CuttingBars {
    long long level = 1;
    long long up_to = 0;
    std::vector<long long> bars;

    bool contains(long long pos) const {
        return std::binary_search(bars.begin(), bars.end(), pos);
    }
    // index of the least bar >= pos
    std::optional<std::size_t> least_geq(long long pos) const {
        auto it = std::lower_bound(bars.begin(), bars.end(), pos);
        if (it == bars.end()) return std::nullopt;
        return static_cast<std::size_t>(it - bars.begin());
    }
    // index of the largest bar <= pos
    std::optional<std::size_t> greatest_leq(long long pos) const {
        auto it = std::upper_bound(bars.begin(), bars.end(), pos);
        if (it == bars.begin()) return std::nullopt;
        return static_cast<std::size_t>(it - bars.begin()) - 1;
    }
};

inline CuttingBars cutting_bars(const FixedPointWindow& u, long long k, long long up_to) {
    if (k < 1) throw Error("cutting bar level must be >= 1");
    if (up_to < 1) throw Error("up_to must be >= 1");
    if (up_to > u.size() + 1)
        throw WindowExhausted("bars up to " + std::to_string(up_to) + " need a window past length " + std::to_string(u.size()));
    const auto len = u.substitution().image_length_table(k);
    const Alphabet& a = u.substitution().alphabet();
    CuttingBars out;
    out.level = k;
    out.up_to = up_to;
    long long cum = 0;
    long long p = 0;
    while (cum + 1 <= up_to) {
        out.bars.push_back(cum + 1);
        ++p;
        if (p > u.size()) break; // the bar at W+1 can be the last representable one
        cum += len[static_cast<std::size_t>(a.index(u.at(p)))];
    }
    return out;
}

struct FittedDecomposition {
    Interval I;
    long long level = 1;
    long long m = 0, M = 0; // least bar >= lo, largest bar <= hi+1
    long long p = 0, q = 0; // m = |zeta^k(u[1..p])|+1, M = |zeta^k(u[1..q])|+1
    std::string pref, suf;  // u[lo..m-1] and u[M..hi]
    std::optional<long long> succ_bar; // successor bar of M, when inside the window
    std::optional<long long> pred_bar; // predecessor bar of m, when one exists

    bool fitted() const { return pref.empty() && suf.empty(); }
    Interval interior() const { return {p + 1, q}; }

    long long succ() const {
        if (!succ_bar) throw WindowExhausted("successor bar lies outside the window");
        return *succ_bar;
    }
    long long pred() const {
        if (!pred_bar) throw Error("bar 1 has no predecessor");
        return *pred_bar;
    }
};

// Overload reusing precomputed bars; they must reach past I.hi + 1.
inline FittedDecomposition decompose(const FixedPointWindow& u, Interval I, long long k,
                                     const CuttingBars& bars) {
    if (!I.valid() || I.length() < 1) throw Error("invalid interval");
    if (I.hi > u.size()) throw WindowExhausted("interval beyond window");
    if (bars.level != k || bars.up_to < I.hi + 1) throw Error("bars do not cover the interval");

    auto mi = bars.least_geq(I.lo);
    if (!mi || bars.bars[*mi] > I.hi + 1) throw NoBarInside();
    auto Mi = bars.greatest_leq(I.hi + 1);

    FittedDecomposition d;
    d.I = I;
    d.level = k;
    d.m = bars.bars[*mi];
    d.M = bars.bars[*Mi];
    d.p = static_cast<long long>(*mi);
    d.q = static_cast<long long>(*Mi);
    if (d.m > I.lo) d.pref = std::string(u.segment({I.lo, d.m - 1}));
    if (d.M <= I.hi) d.suf = std::string(u.segment({d.M, I.hi}));
    if (*Mi + 1 < bars.bars.size()) d.succ_bar = bars.bars[*Mi + 1];
    if (*mi > 0) d.pred_bar = bars.bars[*mi - 1];
    return d;
}

inline FittedDecomposition decompose(const FixedPointWindow& u, Interval I, long long k) {
    if (!I.valid() || I.length() < 1) throw Error("invalid interval");
    if (I.hi > u.size()) throw WindowExhausted("interval beyond window");
    const auto len = u.substitution().image_length_table(k);
    long long stride = *std::max_element(len.begin(), len.end());
    long long up_to = std::min(u.size() + 1, I.hi + 1 + stride);
    return decompose(u, I, k, cutting_bars(u, k, up_to));
}

inline bool is_fitted(const FixedPointWindow& u, Interval I, long long k) {
    if (!I.valid() || I.length() < 1) throw Error("invalid interval");
    if (I.hi > u.size()) throw WindowExhausted("interval beyond window");
    CuttingBars bars = cutting_bars(u, k, I.hi + 1);
    return bars.contains(I.lo) && bars.contains(I.hi + 1);
}

// Interior preimage of a 1-fitted occurrence of w; all fitted occurrences in the
// window are cross-checked, a disagreement disproves strong recognizability.
inline std::string desubstitute(const FixedPointWindow& u, std::string_view w, long long K, long long k,
                                const CuttingBars& bars) {
    if (static_cast<long long>(w.size()) <= K) throw Error("word no longer than the recognizability index");
    auto occs = u.occurrences(w);
    if (occs.empty()) throw NotInLanguage(std::string(w));
    long long wl = static_cast<long long>(w.size());

    std::optional<long long> first_pos;
    std::string_view interior;
    for (long long pos : occs) {
        if (pos + wl > u.size() + 1) continue;
        if (!bars.contains(pos) || !bars.contains(pos + wl)) continue;
        long long p = static_cast<long long>(*bars.least_geq(pos));
        long long q = static_cast<long long>(*bars.least_geq(pos + wl));
        std::string_view cur = u.segment({p + 1, q});
        if (!first_pos) {
            first_pos = pos;
            interior = cur;
        } else if (cur != interior) {
            throw AmbiguousDesubstitution(*first_pos, pos);
        }
    }
    if (!first_pos) throw NotFitted();
    return std::string(interior);
}

inline std::string desubstitute(const FixedPointWindow& u, std::string_view w, long long K, long long k = 1) {
    return desubstitute(u, w, K, k, cutting_bars(u, k, u.size() + 1));
}

struct RecognizabilityCertificate {
    enum class Status { ConsistentUpToWindow, Counterexample };
    long long level = 1;
    long long K_hat = 0;
    long long window = 0;
    long long cap = 0;          // fitted-word length cap used by the scan
    bool cap_converged = false; // K_hat + 4L^2 <= cap
    Status status = Status::ConsistentUpToWindow;
    std::optional<std::pair<Interval, Interval>> witness; // fitted I and the violating J
};

namespace detail {

struct ViolationScan {
    long long max_len = 0;
    std::optional<std::pair<Interval, Interval>> witness;
};

// Largest |w| of a 1-fitted w (|w| <= cap) that also occurs not-fitted or fitted
// with a different interior. Zero means no violation at or below the cap.
inline ViolationScan scan_violations(const FixedPointWindow& u, long long k, long long cap) {
    CuttingBars bars = cutting_bars(u, k, u.size() + 1);
    const long long W = u.size();

    struct Entry {
        Interval I;
        std::string_view interior;
    };
    std::unordered_map<std::string_view, Entry> fitted;
    ViolationScan out;

    auto note = [&](long long len, Interval I, Interval J) {
        if (len > out.max_len) {
            out.max_len = len;
            out.witness = {{I, J}};
        }
    };

    const auto& B = bars.bars;
    for (std::size_t i = 0; i + 1 < B.size(); ++i) {
        for (std::size_t j = i + 1; j < B.size(); ++j) {
            long long len = B[j] - B[i];
            if (len > cap) break;
            if (B[j] - 1 > W) break;
            Interval I{B[i], B[j] - 1};
            std::string_view w = u.segment(I);
            Interval inter{static_cast<long long>(i) + 1, static_cast<long long>(j)};
            auto [it, inserted] = fitted.try_emplace(w, Entry{I, u.segment(inter)});
            if (!inserted && it->second.interior != u.segment(inter))
                note(len, it->second.I, I);
        }
    }

    for (const auto& [w, e] : fitted) {
        long long wl = static_cast<long long>(w.size());
        for (long long pos : occurrences_in(u.view(), w)) {
            if (pos + wl > W + 1) continue;
            if (!bars.contains(pos) || !bars.contains(pos + wl))
                note(wl, e.I, {pos, pos + wl - 1});
        }
    }
    return out;
}

} // namespace detail

// Window-bounded estimate of the strong recognizability index of zeta^k: the
// least K with no violation in the window. Fitted words are scanned up to a cap
// of 4L^2 + candidate, iterated until the cap provably covers the estimate.
inline RecognizabilityCertificate
estimate_recognizability_index(const FixedPointWindow& u, long long k, std::optional<long long> cap_override = std::nullopt) {
    const auto len = u.substitution().image_length_table(k);
    const long long L = *std::max_element(len.begin(), len.end());
    RecognizabilityCertificate cert;
    cert.level = k;
    cert.window = u.size();

    long long cap = cap_override.value_or(4 * L * L);
    int saturated_rounds = 0;
    for (;;) {
        cap = std::min(cap, u.size());
        auto scan = detail::scan_violations(u, k, cap);
        cert.K_hat = scan.max_len;
        cert.cap = cap;
        cert.witness = scan.witness;
        cert.cap_converged = cert.K_hat + 4 * L * L <= cap;
        if (cert.cap_converged || cap >= u.size() || cap_override) break;
        // Violations reaching the cap on consecutive rounds indicate a divergent
        // index (e.g. Fibonacci, where every right-special factor starting at a
        // bar letter violates); growing the cap further just tracks the window.
        saturated_rounds = cert.K_hat >= cap - 2 * L ? saturated_rounds + 1 : 0;
        if (saturated_rounds >= 2) break;
        cap = cert.K_hat + 4 * L * L;
    }
    cert.status = RecognizabilityCertificate::Status::ConsistentUpToWindow;
    return cert;
}

// Check a claimed index: scans for a violating pair longer than K_claim.
inline RecognizabilityCertificate
verify_recognizability_index(const FixedPointWindow& u, long long k, long long K_claim) {
    const auto len = u.substitution().image_length_table(k);
    const long long L = *std::max_element(len.begin(), len.end());
    auto scan = detail::scan_violations(u, k, std::min(u.size(), K_claim + 4 * L * L));
    RecognizabilityCertificate cert;
    cert.level = k;
    cert.window = u.size();
    cert.cap = std::min(u.size(), K_claim + 4 * L * L);
    cert.K_hat = scan.max_len;
    cert.cap_converged = true;
    if (scan.max_len > K_claim) {
        cert.status = RecognizabilityCertificate::Status::Counterexample;
        cert.witness = scan.witness;
    } else {
        cert.status = RecognizabilityCertificate::Status::ConsistentUpToWindow;
    }
    return cert;
}

struct PresufWitness {
    Interval I, J;
    std::string conclusion; // "pref", "suf" or "interior"
};

struct PresufReport {
    long long trials = 0;
    long long pairs_checked = 0;
    long long failures = 0;
    long long threshold = 0; // 2L + K
    bool pass = false;
    std::vector<PresufWitness> witnesses;
};

// Random equal-factor pairs longer than 2L+K must share pref, suf and interior.
inline PresufReport check_presuf_lemma(const FixedPointWindow& u, long long K, long long trials,
                                       unsigned long long seed = 1, long long max_len = 0) {
    const long long L = u.substitution().max_image_length();
    const long long thr = 2 * L + K;
    if (max_len <= thr) max_len = thr + 32;
    PresufReport rep;
    rep.trials = trials;
    rep.threshold = thr;
    if (max_len > u.size()) throw WindowExhausted("window shorter than sampled factor length");

    std::mt19937_64 rng(seed);
    auto pick = [&](long long n) { return static_cast<long long>(rng() % static_cast<unsigned long long>(n)); };
    CuttingBars bars = cutting_bars(u, 1, u.size() + 1);

    for (long long t = 0; t < trials; ++t) {
        long long l = thr + 1 + pick(max_len - thr);
        long long lo = 1 + pick(u.size() - l + 1);
        Interval I{lo, lo + l - 1};
        std::string_view w = u.segment(I);
        auto occs = u.occurrences(w);
        long long jo = occs[static_cast<std::size_t>(pick(static_cast<long long>(occs.size())))];
        Interval J{jo, jo + l - 1};
        auto dI = decompose(u, I, 1, bars);
        auto dJ = decompose(u, J, 1, bars);
        ++rep.pairs_checked;
        const char* bad = nullptr;
        if (dI.pref != dJ.pref) bad = "pref";
        else if (dI.suf != dJ.suf) bad = "suf";
        else if (u.segment(dI.interior()) != u.segment(dJ.interior())) bad = "interior";
        if (bad) {
            ++rep.failures;
            if (rep.witnesses.size() < 10) rep.witnesses.push_back({I, J, bad});
        }
    }
    rep.pass = rep.failures == 0;
    return rep;
}

} // namespace substwords

#pragma once

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "colorings.hpp"

namespace substwords {

// Window-bounded scanners. Every certificate is stamped with the window it was
// computed over; witnesses are re-validated against the window by direct
// recomputation before they are returned, and scanners return the
// lexicographically least (position, length) witness so golden tests are
// reproducible.

// ---------------------------------------------------------------------------
// Power table over the window.

struct PowerScanCertificate {
    long long window = 0;
    PowerTable powers;
    long long k0 = 0; // 1 + largest exponent seen
};

inline PowerScanCertificate scan_powers(const FixedPointWindow& u, long long max_base_len) {
    PowerScanCertificate cert;
    cert.window = u.size();
    cert.powers = max_power_exponents(u.view(), max_base_len);
    cert.k0 = 1 + cert.powers.global_max;
    return cert;
}

// ---------------------------------------------------------------------------
// Shift-periodicity. A shift n is witnessed aperiodic when some in-window
// position m has u[m] != u[m+n]. Repetitions of exponent e survive unwitnessed
// up to shifts around W/e, so callers should keep max_shift <= W/4 for words
// whose critical exponent may approach 4.

struct AperiodicityReport {
    long long window = 0;
    long long max_shift = 0;
    std::vector<long long> unwitnessed; // shifts matching out to the window end
    bool pass = false;
};

inline AperiodicityReport check_aperiodicity(const FixedPointWindow& u, long long max_shift) {
    AperiodicityReport rep;
    rep.window = u.size();
    rep.max_shift = std::min(max_shift, u.size() - 1);
    auto z = z_array(u.view());
    for (long long n = 1; n <= rep.max_shift; ++n)
        if (z[static_cast<std::size_t>(n)] >= u.size() - n) rep.unwitnessed.push_back(n);
    rep.pass = rep.unwitnessed.empty();
    return rep;
}

// ---------------------------------------------------------------------------
// Colorer adaptors. Each returns a callable mapping an occurrence interval to
// a color; the referenced context must outlive the callable.

inline std::function<Color(Interval)> identity_colorer(const FixedPointWindow& u) {
    return [u](Interval I) { return Color::literal(std::string(u.segment(I))); };
}

inline std::function<Color(Interval)> uniform_colorer(const UniformColoringContext& ctx) {
    return [&ctx](Interval I) { return color_uniform_at(ctx, I); };
}

// Letter-frequency colorer with the exact algebraic comparisons hoisted out of
// the scan loops: for each block length the least count that strictly exceeds
// len * d_alpha is precomputed, so coloring a block costs a few prefix-sum
// lookups. Agrees with color_frequency on every in-window block.
class FrequencyColorer {
public:
    FrequencyColorer(const FixedPointWindow& u, const FrequencyColoringContext& ctx, long long max_len)
        : alphabet_(ctx.alphabet), max_len_(std::min(max_len, u.size())) {
        const int a = alphabet_.size();
        const long long W = u.size();
        prefix_.assign(static_cast<std::size_t>(a), std::vector<int>(static_cast<std::size_t>(W) + 1, 0));
        for (long long p = 1; p <= W; ++p) {
            int li = alphabet_.index(u.at(p));
            for (int i = 0; i < a; ++i)
                prefix_[static_cast<std::size_t>(i)][static_cast<std::size_t>(p)] =
                    prefix_[static_cast<std::size_t>(i)][static_cast<std::size_t>(p - 1)] + (i == li ? 1 : 0);
        }
        least_excess_.assign(static_cast<std::size_t>(max_len_) + 1, std::vector<long long>(static_cast<std::size_t>(a), 0));
        for (long long len = 1; len <= max_len_; ++len)
            for (int i = 0; i < a; ++i) {
                long long lo = 0, hi = len + 1; // least c with c/len > d_alpha
                while (lo < hi) {
                    long long mid = (lo + hi) / 2;
                    if (ctx.freqs.compare(i, Rat(mid, len)) < 0) hi = mid;
                    else lo = mid + 1;
                }
                least_excess_[static_cast<std::size_t>(len)][static_cast<std::size_t>(i)] = lo;
            }
    }

    Color operator()(Interval I) const {
        if (!I.valid()) throw EmptyWord();
        if (I.length() > max_len_) throw Error("block longer than precomputed threshold table");
        std::string members;
        for (int i = 0; i < alphabet_.size(); ++i) {
            long long c = prefix_[static_cast<std::size_t>(i)][static_cast<std::size_t>(I.hi)] -
                          prefix_[static_cast<std::size_t>(i)][static_cast<std::size_t>(I.lo - 1)];
            if (c >= least_excess_[static_cast<std::size_t>(I.length())][static_cast<std::size_t>(i)])
                members += alphabet_.letter(i);
        }
        return Color::letter_set(members);
    }

private:
    Alphabet alphabet_;
    long long max_len_;
    std::vector<std::vector<int>> prefix_;
    std::vector<std::vector<long long>> least_excess_;
};

// ---------------------------------------------------------------------------
// Uniform monochromatic k-powers: k consecutive blocks of one length, one
// color.

struct UniformPowerWitness {
    long long pos = 0;
    long long len = 0;
    Color color;
};

struct UniformScanCertificate {
    long long window = 0;
    long long k = 0;
    std::vector<long long> lengths;
    std::optional<UniformPowerWitness> witness;
    std::vector<long long> exhausted_lengths; // k blocks never fit the window
    long long color_evals = 0;
    long long window_skips = 0; // blocks whose color needs bars past the window
};

inline UniformScanCertificate
scan_uniform_monochromatic(const std::function<Color(Interval)>& colorer, const FixedPointWindow& u,
                           long long k, std::vector<long long> lengths) {
    if (k < 2) throw Error("k-power scan needs k >= 2");
    std::sort(lengths.begin(), lengths.end());
    lengths.erase(std::unique(lengths.begin(), lengths.end()), lengths.end());
    if (!lengths.empty() && lengths.front() < 1) throw Error("block length must be >= 1");

    UniformScanCertificate cert;
    cert.window = u.size();
    cert.k = k;
    cert.lengths = lengths;
    const long long W = u.size();

    for (long long l : lengths) {
        if (k * l > W) {
            cert.exhausted_lengths.push_back(l);
            continue;
        }
        const long long last = W - l + 1; // rightmost block start
        std::vector<int> ids(static_cast<std::size_t>(last) + 1, -1);
        std::unordered_map<std::string, int> interned;
        std::vector<Color> palette;
        for (long long p = 1; p <= last; ++p) {
            ++cert.color_evals;
            Color c;
            try {
                c = colorer({p, p + l - 1});
            } catch (const WindowExhausted&) {
                ++cert.window_skips;
                continue;
            }
            auto [it, fresh] = interned.try_emplace(c.to_string(), static_cast<int>(palette.size()));
            if (fresh) palette.push_back(c);
            ids[static_cast<std::size_t>(p)] = it->second;
        }
        std::vector<long long> run(static_cast<std::size_t>(last) + 1, 0);
        for (long long p = last; p >= 1; --p) {
            if (ids[static_cast<std::size_t>(p)] < 0) continue;
            bool chained = p + l <= last && ids[static_cast<std::size_t>(p)] == ids[static_cast<std::size_t>(p + l)];
            run[static_cast<std::size_t>(p)] = chained ? run[static_cast<std::size_t>(p + l)] + 1 : 1;
        }
        for (long long p = 1; p <= last; ++p) {
            if (run[static_cast<std::size_t>(p)] < k) continue;
            if (!cert.witness || p < cert.witness->pos || (p == cert.witness->pos && l < cert.witness->len))
                cert.witness = UniformPowerWitness{p, l, palette[static_cast<std::size_t>(ids[static_cast<std::size_t>(p)])]};
            break;
        }
    }

    if (cert.witness) { // re-validate against the window
        for (long long i = 0; i < k; ++i) {
            Interval block{cert.witness->pos + i * cert.witness->len,
                           cert.witness->pos + (i + 1) * cert.witness->len - 1};
            if (!(colorer(block) == cert.witness->color)) throw Error("witness failed revalidation");
        }
    }
    return cert;
}

// ---------------------------------------------------------------------------
// Bounded-gap monochromatic powers: consecutive parts of one color, each part
// shorter than p_bound. Longest-chain dynamic program per color over end
// positions.

struct ChainWitness {
    long long end = 0; // last covered position
    std::vector<long long> part_lens;
    Color color;
};

struct BoundedGapCertificate {
    long long window = 0;
    long long p_bound = 0;
    long long k_target = 0;
    long long max_k = 0;
    bool no_witness = true; // max_k < k_target
    std::map<std::string, long long> per_color_max;
    std::optional<ChainWitness> witness; // chain attaining max_k
    long long color_evals = 0;
    long long window_skips = 0;
};

inline BoundedGapCertificate
scan_bounded_gap_monochromatic(const std::function<Color(Interval)>& colorer, const FixedPointWindow& u,
                               long long p_bound, long long k_target) {
    if (p_bound < 2) throw Error("p_bound must be >= 2");
    BoundedGapCertificate cert;
    cert.window = u.size();
    cert.p_bound = p_bound;
    cert.k_target = k_target;

    const long long W = u.size();
    const long long tmax = std::min(p_bound - 1, W);
    std::unordered_map<std::string, int> interned;
    std::vector<Color> palette;
    std::vector<std::vector<int>> best;   // best[id][n]: longest id-colored chain ending at n
    std::vector<std::vector<int>> choice; // part length taken at n

    for (long long n = 1; n <= W; ++n) {
        for (long long t = 1; t <= std::min(tmax, n); ++t) {
            ++cert.color_evals;
            Color c;
            try {
                c = colorer({n - t + 1, n});
            } catch (const WindowExhausted&) {
                ++cert.window_skips;
                continue;
            }
            auto [it, fresh] = interned.try_emplace(c.to_string(), static_cast<int>(palette.size()));
            if (fresh) {
                palette.push_back(c);
                best.emplace_back(static_cast<std::size_t>(W) + 1, 0);
                choice.emplace_back(static_cast<std::size_t>(W) + 1, 0);
            }
            int id = it->second;
            int f = best[static_cast<std::size_t>(id)][static_cast<std::size_t>(n - t)] + 1;
            if (f > best[static_cast<std::size_t>(id)][static_cast<std::size_t>(n)]) {
                best[static_cast<std::size_t>(id)][static_cast<std::size_t>(n)] = f;
                choice[static_cast<std::size_t>(id)][static_cast<std::size_t>(n)] = static_cast<int>(t);
            }
        }
    }

    int best_id = -1;
    long long best_end = 0;
    for (std::size_t id = 0; id < palette.size(); ++id) {
        long long m = 0, end = 0;
        for (long long n = 1; n <= W; ++n)
            if (best[id][static_cast<std::size_t>(n)] > m) {
                m = best[id][static_cast<std::size_t>(n)];
                end = n;
            }
        cert.per_color_max[palette[id].to_string()] = m;
        if (m > cert.max_k) {
            cert.max_k = m;
            best_id = static_cast<int>(id);
            best_end = end;
        }
    }
    cert.no_witness = cert.max_k < k_target;

    if (best_id >= 0) {
        ChainWitness wit;
        wit.color = palette[static_cast<std::size_t>(best_id)];
        wit.end = best_end;
        for (long long n = best_end; n > 0 && best[static_cast<std::size_t>(best_id)][static_cast<std::size_t>(n)] > 0;) {
            long long t = choice[static_cast<std::size_t>(best_id)][static_cast<std::size_t>(n)];
            wit.part_lens.push_back(t);
            n -= t;
        }
        std::reverse(wit.part_lens.begin(), wit.part_lens.end());
        long long at = wit.end;
        for (auto it = wit.part_lens.rbegin(); it != wit.part_lens.rend(); ++it) { // re-validate
            if (*it >= p_bound || !(colorer({at - *it + 1, at}) == wit.color))
                throw Error("witness failed revalidation");
            at -= *it;
        }
        cert.witness = std::move(wit);
    }
    return cert;
}

// ---------------------------------------------------------------------------
// Abelian k-powers: k consecutive blocks of one length with equal Parikh
// vectors.

struct AbelianWitness {
    long long pos = 0;
    long long part_len = 0;
};

struct AbelianScanCertificate {
    long long window = 0;
    long long k = 0;
    long long max_part_len = 0;
    std::optional<AbelianWitness> witness;
    std::vector<long long> exhausted_lengths;
};

inline AbelianScanCertificate scan_abelian_powers(const FixedPointWindow& u, long long k, long long max_part_len) {
    if (k < 2) throw Error("abelian power scan needs k >= 2");
    AbelianScanCertificate cert;
    cert.window = u.size();
    cert.k = k;
    cert.max_part_len = max_part_len;

    const Alphabet& a = u.substitution().alphabet();
    const long long W = u.size();
    const int na = a.size();
    std::vector<std::vector<int>> prefix(static_cast<std::size_t>(na),
                                         std::vector<int>(static_cast<std::size_t>(W) + 1, 0));
    for (long long p = 1; p <= W; ++p) {
        int li = a.index(u.at(p));
        for (int i = 0; i < na; ++i)
            prefix[static_cast<std::size_t>(i)][static_cast<std::size_t>(p)] =
                prefix[static_cast<std::size_t>(i)][static_cast<std::size_t>(p - 1)] + (i == li ? 1 : 0);
    }
    auto count = [&](int i, long long lo, long long hi) {
        return prefix[static_cast<std::size_t>(i)][static_cast<std::size_t>(hi)] -
               prefix[static_cast<std::size_t>(i)][static_cast<std::size_t>(lo - 1)];
    };

    for (long long t = 1; t <= std::min(max_part_len, W); ++t) {
        if (k * t > W) {
            cert.exhausted_lengths.push_back(t);
            continue;
        }
        const long long last = W - 2 * t + 1; // rightmost start of an adjacent block pair
        std::vector<long long> run(static_cast<std::size_t>(W) + 1, 0);
        for (long long x = W - t + 1; x >= 1; --x) {
            bool matched = x <= last;
            for (int i = 0; matched && i < na; ++i)
                matched = count(i, x, x + t - 1) == count(i, x + t, x + 2 * t - 1);
            run[static_cast<std::size_t>(x)] = matched ? run[static_cast<std::size_t>(x + t)] + 1 : 1;
        }
        for (long long x = 1; x <= last; ++x) {
            if (run[static_cast<std::size_t>(x)] < k) continue;
            if (!cert.witness || x < cert.witness->pos || (x == cert.witness->pos && t < cert.witness->part_len))
                cert.witness = AbelianWitness{x, t};
            break;
        }
    }

    if (cert.witness) { // re-validate against the window
        auto first = parikh(a, u.segment({cert.witness->pos, cert.witness->pos + cert.witness->part_len - 1}));
        for (long long i = 1; i < k; ++i) {
            Interval block{cert.witness->pos + i * cert.witness->part_len,
                           cert.witness->pos + (i + 1) * cert.witness->part_len - 1};
            if (parikh(a, u.segment(block)) != first) throw Error("witness failed revalidation");
        }
    }
    return cert;
}

// ---------------------------------------------------------------------------
// Monochromatic prefix factorizations. A factorization u = u1 u2 ... with all
// parts of one prefix color forces every part to be a prefix occurrence, so
// the chain of covered positions walks a DAG: children of position n are the
// lengths t with u[n+1 .. n+t] = u[1 .. t] and matching prefix color. The
// child list at n is provably complete when the prefix match at n+1 stops
// before the window end. Root parts are capped at root_cap (recorded in the
// certificate: the claim is scoped to factorizations starting that short).

struct FrontierNode {
    long long position = 0;     // covered prefix length
    long long prefix_match = 0; // longest t with u[n+1 .. n+t] = u[1 .. t], window-capped
    bool complete = false;      // prefix_match < window - position

    bool operator==(const FrontierNode&) const = default;
};

struct FactorizationCertificate {
    enum class Outcome { Stuck, Covers, WindowExhausted };

    Color color;
    long long window = 0;
    long long root_cap = 0;
    long long horizon = 0;
    Outcome outcome = Outcome::Stuck;
    std::vector<FrontierNode> frontier;  // dead ends, in discovery order
    std::vector<long long> cover_parts;  // part lengths reaching the horizon
    long long nodes = 0;                 // distinct positions reached
    long long max_position = 0;
    bool all_complete = true;
};

struct FactorizationSearchReport {
    long long window = 0;
    long long root_cap = 0;
    long long horizon = 0;
    std::vector<FactorizationCertificate> certificates; // by first attaining prefix length
    bool all_stuck = true;
    bool all_complete = true;
    long long max_position = 0;
    long long max_nodes = 0;
};

inline FactorizationSearchReport
search_monochromatic_factorization(const FixedPointWindow& u,
                                   const std::function<Color(long long)>& prefix_colorer,
                                   long long root_cap, long long horizon = 0) {
    const long long W = u.size();
    if (horizon <= 0 || horizon > W) horizon = W;
    root_cap = std::min(root_cap, W);
    if (root_cap < 1) throw Error("root_cap must be >= 1");

    FactorizationSearchReport rep;
    rep.window = W;
    rep.root_cap = root_cap;
    rep.horizon = horizon;

    // Prefix colors for every in-window length; lengths grouped per color.
    std::unordered_map<std::string, int> interned;
    std::vector<Color> palette;
    std::vector<std::vector<long long>> lens_of; // ascending per color
    std::vector<int> color_of(static_cast<std::size_t>(W) + 1, -1);
    for (long long t = 1; t <= W; ++t) {
        Color c = prefix_colorer(t);
        auto [it, fresh] = interned.try_emplace(c.to_string(), static_cast<int>(palette.size()));
        if (fresh) {
            palette.push_back(c);
            lens_of.emplace_back();
        }
        color_of[static_cast<std::size_t>(t)] = it->second;
        lens_of[static_cast<std::size_t>(it->second)].push_back(t);
    }

    auto z = z_array(u.view());

    // Palette ids are assigned in first-attainment order; one certificate per
    // attainable color. Colors first attained above root_cap get a trivially
    // stuck certificate (empty root candidate list).
    for (int id = 0; id < static_cast<int>(palette.size()); ++id) {
        FactorizationCertificate cert;
        cert.color = palette[static_cast<std::size_t>(id)];
        cert.window = W;
        cert.root_cap = root_cap;
        cert.horizon = horizon;

        const auto& lens = lens_of[static_cast<std::size_t>(id)];
        std::vector<char> seen(static_cast<std::size_t>(W) + 1, 0);
        std::vector<long long> parent(static_cast<std::size_t>(W) + 1, -1);
        std::deque<long long> queue;
        std::optional<long long> covered;
        seen[0] = 1;
        queue.push_back(0);

        while (!queue.empty()) {
            long long n = queue.front();
            queue.pop_front();
            ++cert.nodes;
            cert.max_position = std::max(cert.max_position, n);
            if (n >= horizon) { covered = n; break; }
            // Root candidates are scoped by root_cap (recorded); interior
            // candidates by the prefix match at n+1, window-capped.
            long long zn = n == 0 ? root_cap : z[static_cast<std::size_t>(n)];
            bool complete = true;
            if (n > 0 && n + zn >= W) {
                complete = false;
                cert.all_complete = false;
            }
            bool any = false;
            for (long long t : lens) {
                if (t > zn) break;
                any = true;
                long long child = n + t;
                if (seen[static_cast<std::size_t>(child)]) continue;
                seen[static_cast<std::size_t>(child)] = 1;
                parent[static_cast<std::size_t>(child)] = n;
                queue.push_back(child);
            }
            if (!any || !complete) cert.frontier.push_back({n, zn, complete});
        }

        if (covered) {
            cert.outcome = FactorizationCertificate::Outcome::Covers;
            for (long long n = *covered; n > 0; n = parent[static_cast<std::size_t>(n)])
                cert.cover_parts.push_back(n - parent[static_cast<std::size_t>(n)]);
            std::reverse(cert.cover_parts.begin(), cert.cover_parts.end());
            long long at = 0;
            for (long long t : cert.cover_parts) { // re-validate
                bool prefix_occ = u.segment({at + 1, at + t}) == u.segment({1, t});
                if (!prefix_occ || !(prefix_colorer(t) == cert.color)) throw Error("witness failed revalidation");
                at += t;
            }
            if (at < horizon) throw Error("witness failed revalidation");
        } else {
            cert.outcome = cert.all_complete ? FactorizationCertificate::Outcome::Stuck
                                             : FactorizationCertificate::Outcome::WindowExhausted;
        }

        rep.all_stuck = rep.all_stuck && cert.outcome == FactorizationCertificate::Outcome::Stuck;
        rep.all_complete = rep.all_complete && cert.all_complete;
        rep.max_position = std::max(rep.max_position, cert.max_position);
        rep.max_nodes = std::max(rep.max_nodes, cert.nodes);
        rep.certificates.push_back(std::move(cert));
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Factor complexity: number of distinct length-n factors in the window. Exact
// for the infinite word once the window exceeds the recurrence constant R(n);
// the count carries the window stamp, R is not computed here.

inline long long complexity(const FixedPointWindow& u, long long n) {
    if (n < 1 || n > u.size()) throw Error("factor length outside window");
    std::unordered_set<std::string_view> seen;
    for (long long p = 1; p + n - 1 <= u.size(); ++p)
        seen.insert(u.view().substr(static_cast<std::size_t>(p - 1), static_cast<std::size_t>(n)));
    return static_cast<long long>(seen.size());
}

// ---------------------------------------------------------------------------
// Balance: per-letter counts over equal-length factors may spread by at most 1.

struct BalanceWitness {
    long long len = 0;
    char letter = 0;
    std::string high, low; // factors attaining max and min count
};

struct BalanceReport {
    long long window = 0;
    long long max_len = 0;
    bool balanced = true;
    std::optional<BalanceWitness> witness; // least length, then alphabet order
};

inline BalanceReport balance_check(const FixedPointWindow& u, long long max_len) {
    if (max_len < 1) throw Error("max_len must be >= 1");
    if (max_len > u.size() / 4) throw Error("max_len above the W/4 window margin");
    BalanceReport rep;
    rep.window = u.size();
    rep.max_len = max_len;

    const Alphabet& a = u.substitution().alphabet();
    for (long long n = 1; n <= max_len && rep.balanced; ++n) {
        std::vector<long long> cnt(static_cast<std::size_t>(a.size()), 0);
        for (long long p = 1; p <= n; ++p) ++cnt[static_cast<std::size_t>(a.index(u.at(p)))];
        std::vector<long long> lo = cnt, hi = cnt, lo_at(cnt.size(), 1), hi_at(cnt.size(), 1);
        for (long long p = 2; p + n - 1 <= u.size(); ++p) {
            --cnt[static_cast<std::size_t>(a.index(u.at(p - 1)))];
            ++cnt[static_cast<std::size_t>(a.index(u.at(p + n - 1)))];
            for (std::size_t i = 0; i < cnt.size(); ++i) {
                if (cnt[i] < lo[i]) { lo[i] = cnt[i]; lo_at[i] = p; }
                if (cnt[i] > hi[i]) { hi[i] = cnt[i]; hi_at[i] = p; }
            }
        }
        for (int i = 0; i < a.size(); ++i) {
            if (hi[static_cast<std::size_t>(i)] - lo[static_cast<std::size_t>(i)] <= 1) continue;
            rep.balanced = false;
            rep.witness = BalanceWitness{
                n, a.letter(i),
                std::string(u.segment({hi_at[static_cast<std::size_t>(i)], hi_at[static_cast<std::size_t>(i)] + n - 1})),
                std::string(u.segment({lo_at[static_cast<std::size_t>(i)], lo_at[static_cast<std::size_t>(i)] + n - 1}))};
            break;
        }
    }
    return rep;
}

} // namespace substwords

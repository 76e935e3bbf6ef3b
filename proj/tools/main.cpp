#include <chrono>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <substwords/frequencies.hpp>
#include <substwords/verifiers.hpp>

using nlohmann::json;
using namespace substwords;

// Exit codes: 0 theorem-consistent outcome, 2 witness found, 3 window
// exhausted (certificate inconclusive at this window), 10 internal error.
// CLI11 usage errors keep their own codes.
namespace {

constexpr int kExitConsistent = 0;
constexpr int kExitWitness = 2;
constexpr int kExitWindowExhausted = 3;
constexpr int kExitInternal = 10;

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    long long ms() const {
        return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
    }
};

Substitution load_substitution(const std::string& path) {
    std::ifstream in(path);
    if (!in.good()) throw Error("cannot open substitution file: " + path);
    return parse_substitution(in, std::filesystem::path(path).stem().string());
}

FixedPointWindow make_window(const Substitution& z, long long w, const std::string& seed) {
    if (seed.empty()) return FixedPointWindow::create(z, w);
    if (seed.size() != 1) throw CLI::ValidationError("--seed", "seed must be a single letter");
    return FixedPointWindow::create(z, seed[0], w);
}

// JSON-lines sink: --out path, or stdout.
struct Emitter {
    std::ofstream file;
    bool to_file = false;

    explicit Emitter(const std::string& path) {
        if (path.empty()) return;
        file.open(path);
        if (!file.good()) throw Error("cannot open output file: " + path);
        to_file = true;
    }
    void emit(const json& j) { (to_file ? static_cast<std::ostream&>(file) : std::cout) << j.dump() << "\n"; }
};

json base_record(const std::string& kind, const FixedPointWindow& u, json params, long long elapsed_ms) {
    return json{{"v", 1},
                {"kind", kind},
                {"subst", u.substitution().name()},
                {"seed", std::string(1, u.seed())},
                {"window", u.size()},
                {"params", std::move(params)},
                {"outcome", ""},
                {"witnesses", json::array()},
                {"flags", json::array()},
                {"elapsed_ms", elapsed_ms}};
}

// Coloring spec: name[:key=value,...], e.g. uniform:K=0,r=1 or factorization:K=32.
struct ColoringSpec {
    std::string name;
    std::map<std::string, long long> kv;

    std::optional<long long> get(const std::string& key) const {
        auto it = kv.find(key);
        return it == kv.end() ? std::nullopt : std::optional<long long>(it->second);
    }
};

ColoringSpec parse_coloring(const std::string& s) {
    ColoringSpec spec;
    auto colon = s.find(':');
    spec.name = s.substr(0, colon);
    if (colon != std::string::npos) {
        std::stringstream rest(s.substr(colon + 1));
        std::string item;
        while (std::getline(rest, item, ',')) {
            auto eq = item.find('=');
            if (eq == std::string::npos || eq == 0)
                throw CLI::ValidationError("--coloring", "expected key=value, got '" + item + "'");
            try {
                spec.kv[item.substr(0, eq)] = std::stoll(item.substr(eq + 1));
            } catch (const std::exception&) {
                throw CLI::ValidationError("--coloring", "non-integer value in '" + item + "'");
            }
        }
    }
    return spec;
}

json color_json(const Color& c) { return c.to_string(); }

// ---------------------------------------------------------------------------

int cmd_info(const std::string& path) {
    Substitution z = load_substitution(path);
    const Alphabet& a = z.alphabet();

    std::cout << "substitution: " << z.name() << "\n";
    std::cout << "alphabet: " << a.str() << "\n";
    for (int i = 0; i < a.size(); ++i)
        std::cout << "  " << a.letter(i) << " -> " << z.image_by_index(i) << "\n";
    if (auto L = z.constant_length())
        std::cout << "constant length: " << *L << "\n";
    else
        std::cout << "constant length: no (max image length " << z.max_image_length() << ")\n";

    auto prim = is_primitive(z);
    if (prim.primitive)
        std::cout << "primitive: true (incidence matrix power " << prim.witness_n << " is positive)\n";
    else
        std::cout << "primitive: false\n";

    std::string seeds;
    for (char s : z.fixed_point_seeds()) {
        if (!seeds.empty()) seeds += ",";
        seeds += s;
    }
    std::cout << "fixed point seeds: " << (seeds.empty() ? "none" : seeds) << "\n";

    IncidenceMatrix m = incidence_matrix(z);
    std::cout << "incidence matrix (rows indexed by counted letter):\n";
    for (int b = 0; b < m.n; ++b) {
        std::cout << " ";
        for (int c = 0; c < m.n; ++c) std::cout << " " << m.e[static_cast<std::size_t>(b * m.n + c)];
        std::cout << "\n";
    }

    if (prim.primitive) {
        auto freqs = letter_frequencies(z);
        std::cout << "letter frequencies (" << (freqs.rational() ? "rational" : "algebraic") << "):\n";
        std::cout.precision(10);
        for (int i = 0; i < a.size(); ++i)
            std::cout << "  " << a.letter(i) << " = " << std::fixed << freqs.approx(i) << "\n";
    }
    return kExitConsistent;
}

int cmd_prefix(const std::string& path, long long n, const std::string& seed) {
    auto u = make_window(load_substitution(path), n, seed);
    std::cout << u.segment({1, n}) << "\n";
    return kExitConsistent;
}

const char* status_name(RecognizabilityCertificate::Status s) {
    return s == RecognizabilityCertificate::Status::ConsistentUpToWindow ? "consistent-up-to-window" : "counterexample";
}

int cmd_analyze(const std::string& path, long long window, const std::string& seed, const std::string& out,
                long long trials) {
    auto u = make_window(load_substitution(path), window, seed);
    Emitter sink(out);
    int exit_code = kExitConsistent;

    for (long long level : {1LL, 2LL}) {
        Timer t;
        auto cert = estimate_recognizability_index(u, level);
        json rec = base_record("recognizability", u, {{"level", level}}, t.ms());
        rec["outcome"] = status_name(cert.status);
        rec["result"] = {{"K_hat", cert.K_hat}, {"cap", cert.cap}, {"cap_converged", cert.cap_converged}};
        if (!cert.cap_converged) rec["flags"].push_back("estimator-bailed");
        if (cert.witness) {
            rec["witnesses"].push_back({{"I", {cert.witness->first.lo, cert.witness->first.hi}},
                                        {"J", {cert.witness->second.lo, cert.witness->second.hi}}});
        }
        sink.emit(rec);
        std::cout << "recognizability level " << level << ": K_hat = " << cert.K_hat
                  << (cert.cap_converged ? "" : " (estimator bailed: index diverges in this window)") << "\n";

        if (level == 1) {
            Timer pt;
            auto rep = check_presuf_lemma(u, cert.K_hat, trials);
            json pj = base_record("presuf", u, {{"K", cert.K_hat}, {"trials", trials}}, pt.ms());
            pj["outcome"] = rep.pass ? "no-witness" : "witness";
            pj["result"] = {{"pairs_checked", rep.pairs_checked},
                            {"failures", rep.failures},
                            {"threshold", rep.threshold}};
            for (const auto& w : rep.witnesses)
                pj["witnesses"].push_back({{"I", {w.I.lo, w.I.hi}}, {"J", {w.J.lo, w.J.hi}}, {"part", w.conclusion}});
            sink.emit(pj);
            std::cout << "shared-decomposition check at K=" << cert.K_hat << ": " << rep.pairs_checked << " pairs, "
                      << rep.failures << " failures\n";
            if (!rep.pass) exit_code = kExitWitness;
        }

        auto bars = cutting_bars(u, level, std::min<long long>(u.size() + 1, 4096));
        std::cout << "level-" << level << " cutting bars:";
        for (std::size_t i = 0; i < bars.bars.size() && i < 16; ++i) std::cout << " " << bars.bars[i];
        std::cout << (bars.bars.size() > 16 ? " ...\n" : "\n");
    }
    return exit_code;
}

// ---------------------------------------------------------------------------

struct ScanOptions {
    std::string kind;
    std::string coloring = "";
    long long k = 0;
    long long min_len = 1, max_len = 64;
    long long skip_multiples = 0;
    long long p_bound = 30, k_target = 3;
    long long max_part_len = 300;
    long long max_base_len = 8;
    long long root_cap = 2048, horizon = 0;
    long long threads = 1;
};

std::function<Color(Interval)> make_factor_colorer(const ColoringSpec& spec, const FixedPointWindow& u,
                                                   std::vector<std::unique_ptr<UniformColoringContext>>& uni_store,
                                                   std::vector<std::unique_ptr<FrequencyColorer>>& freq_store,
                                                   long long max_block_len) {
    if (spec.name == "identity") return identity_colorer(u);
    if (spec.name == "uniform") {
        std::optional<long long> r = spec.get("r");
        uni_store.push_back(std::make_unique<UniformColoringContext>(
            make_uniform_context(u, spec.get("K").value_or(0), r)));
        return uniform_colorer(*uni_store.back());
    }
    if (spec.name == "frequency") {
        auto fctx = make_frequency_context(u.substitution());
        freq_store.push_back(std::make_unique<FrequencyColorer>(u, fctx, max_block_len));
        return std::function<Color(Interval)>(std::cref(*freq_store.back()));
    }
    throw CLI::ValidationError("--coloring", "coloring '" + spec.name + "' is not applicable to this scan");
}

int scan_uniform(const FixedPointWindow& u, const ScanOptions& opt, Emitter& sink,
                 const std::vector<std::string>& grow_log) {
    ColoringSpec spec = parse_coloring(opt.coloring.empty() ? "uniform:K=0" : opt.coloring);
    std::vector<std::unique_ptr<UniformColoringContext>> uni_store;
    std::vector<std::unique_ptr<FrequencyColorer>> freq_store;
    auto colorer = make_factor_colorer(spec, u, uni_store, freq_store, opt.max_len);

    std::vector<long long> lengths;
    for (long long l = opt.min_len; l <= opt.max_len; ++l)
        if (opt.skip_multiples == 0 || l % opt.skip_multiples != 0) lengths.push_back(l);

    Timer t;
    UniformScanCertificate cert;
    long long nthreads = std::min<long long>(opt.threads, static_cast<long long>(lengths.size()));
    if (nthreads <= 1) {
        cert = scan_uniform_monochromatic(colorer, u, opt.k, lengths);
    } else {
        // Lengths are independent: shard them, then merge with min-witness-wins.
        std::vector<std::vector<long long>> shards(static_cast<std::size_t>(nthreads));
        for (std::size_t i = 0; i < lengths.size(); ++i)
            shards[i % static_cast<std::size_t>(nthreads)].push_back(lengths[i]);
        std::vector<std::future<UniformScanCertificate>> parts;
        for (auto& shard : shards)
            parts.push_back(std::async(std::launch::async, [&, shard] {
                return scan_uniform_monochromatic(colorer, u, opt.k, shard);
            }));
        cert.window = u.size();
        cert.k = opt.k;
        cert.lengths = lengths;
        for (auto& fut : parts) {
            auto part = fut.get();
            cert.color_evals += part.color_evals;
            cert.window_skips += part.window_skips;
            cert.exhausted_lengths.insert(cert.exhausted_lengths.end(), part.exhausted_lengths.begin(),
                                          part.exhausted_lengths.end());
            if (part.witness &&
                (!cert.witness || part.witness->pos < cert.witness->pos ||
                 (part.witness->pos == cert.witness->pos && part.witness->len < cert.witness->len)))
                cert.witness = part.witness;
        }
        std::sort(cert.exhausted_lengths.begin(), cert.exhausted_lengths.end());
    }

    json rec = base_record("uniform", u,
                           {{"k", opt.k},
                            {"min_len", opt.min_len},
                            {"max_len", opt.max_len},
                            {"skip_multiples", opt.skip_multiples},
                            {"coloring", spec.name}},
                           t.ms());
    for (const auto& g : grow_log) rec["flags"].push_back(g);
    rec["result"] = {{"color_evals", cert.color_evals}, {"window_skips", cert.window_skips}};
    int code;
    if (cert.witness) {
        rec["outcome"] = "witness";
        rec["witnesses"].push_back(
            {{"pos", cert.witness->pos}, {"len", cert.witness->len}, {"color", color_json(cert.witness->color)}});
        code = kExitWitness;
    } else if (!cert.exhausted_lengths.empty()) {
        rec["outcome"] = "window-exhausted";
        rec["flags"].push_back("window-exhausted:len>=" + std::to_string(cert.exhausted_lengths.front()));
        code = kExitWindowExhausted;
    } else {
        rec["outcome"] = "no-witness";
        code = kExitConsistent;
    }
    sink.emit(rec);
    return code;
}

int scan_bounded_gap(const FixedPointWindow& u, const ScanOptions& opt, Emitter& sink,
                     const std::vector<std::string>& grow_log) {
    ColoringSpec spec = parse_coloring(opt.coloring.empty() ? "frequency" : opt.coloring);
    std::vector<std::unique_ptr<UniformColoringContext>> uni_store;
    std::vector<std::unique_ptr<FrequencyColorer>> freq_store;
    auto colorer = make_factor_colorer(spec, u, uni_store, freq_store, opt.p_bound - 1);

    Timer t;
    auto cert = scan_bounded_gap_monochromatic(colorer, u, opt.p_bound, opt.k_target);
    json rec = base_record("bounded-gap", u,
                           {{"p_bound", opt.p_bound}, {"k_target", opt.k_target}, {"coloring", spec.name}}, t.ms());
    for (const auto& g : grow_log) rec["flags"].push_back(g);
    rec["outcome"] = cert.no_witness ? "no-witness" : "witness";
    rec["result"] = {{"max_k", cert.max_k}, {"per_color", cert.per_color_max}};
    if (cert.witness)
        rec["witnesses"].push_back({{"end", cert.witness->end},
                                    {"part_lens", cert.witness->part_lens},
                                    {"color", color_json(cert.witness->color)}});
    sink.emit(rec);
    return cert.no_witness ? kExitConsistent : kExitWitness;
}

int scan_abelian(const FixedPointWindow& u, const ScanOptions& opt, Emitter& sink,
                 const std::vector<std::string>& grow_log) {
    Timer t;
    auto cert = scan_abelian_powers(u, opt.k, opt.max_part_len);
    json rec = base_record("abelian", u, {{"k", opt.k}, {"max_part_len", opt.max_part_len}}, t.ms());
    for (const auto& g : grow_log) rec["flags"].push_back(g);
    int code;
    if (cert.witness) {
        rec["outcome"] = "witness";
        rec["witnesses"].push_back({{"pos", cert.witness->pos}, {"part_len", cert.witness->part_len}});
        code = kExitWitness;
    } else if (!cert.exhausted_lengths.empty()) {
        rec["outcome"] = "window-exhausted";
        rec["flags"].push_back("window-exhausted:part_len>=" +
                               std::to_string(cert.exhausted_lengths.front()));
        code = kExitWindowExhausted;
    } else {
        rec["outcome"] = "no-witness";
        code = kExitConsistent;
    }
    sink.emit(rec);
    return code;
}

int scan_factorization(const FixedPointWindow& u, const ScanOptions& opt, Emitter& sink,
                       const std::vector<std::string>& grow_log) {
    ColoringSpec spec = parse_coloring(opt.coloring.empty() ? "factorization" : opt.coloring);
    if (spec.name != "factorization")
        throw CLI::ValidationError("--coloring", "scan 'factorization' requires the factorization coloring");
    Timer t;
    auto ctx = compute_factorization_constants(u, spec.get("K"));
    auto colorer = [&ctx](long long len) { return color_factorization_prefix(ctx, len); };
    auto rep = search_monochromatic_factorization(ctx.window, colorer, opt.root_cap, opt.horizon);

    bool any_covers = false, any_exhausted = false;
    for (const auto& cert : rep.certificates) {
        json rec = base_record("factorization", u,
                               {{"color", color_json(cert.color)},
                                {"root_cap", cert.root_cap},
                                {"horizon", cert.horizon},
                                {"K", ctx.K}},
                               t.ms());
        for (const auto& g : grow_log) rec["flags"].push_back(g);
        rec["result"] = {{"nodes", cert.nodes}, {"max_position", cert.max_position}};
        switch (cert.outcome) {
            case FactorizationCertificate::Outcome::Stuck: {
                rec["outcome"] = "stuck";
                for (std::size_t i = 0; i < cert.frontier.size() && i < 8; ++i)
                    rec["witnesses"].push_back({{"position", cert.frontier[i].position},
                                                {"prefix_match", cert.frontier[i].prefix_match},
                                                {"complete", cert.frontier[i].complete}});
                break;
            }
            case FactorizationCertificate::Outcome::Covers: {
                rec["outcome"] = "covers";
                rec["witnesses"].push_back({{"parts", cert.cover_parts}});
                any_covers = true;
                break;
            }
            case FactorizationCertificate::Outcome::WindowExhausted: {
                rec["outcome"] = "window-exhausted";
                any_exhausted = true;
                break;
            }
        }
        sink.emit(rec);
    }
    if (any_covers) return kExitWitness;
    if (any_exhausted) return kExitWindowExhausted;
    return kExitConsistent;
}

int scan_powers_cmd(const FixedPointWindow& u, const ScanOptions& opt, Emitter& sink,
                    const std::vector<std::string>& grow_log) {
    Timer t;
    auto cert = scan_powers(u, opt.max_base_len);
    json rec = base_record("powers", u, {{"max_base_len", opt.max_base_len}}, t.ms());
    for (const auto& g : grow_log) rec["flags"].push_back(g);
    rec["outcome"] = "table";
    rec["result"] = {{"global_max", cert.powers.global_max}, {"k0", cert.k0}};
    std::vector<std::string> maximal;
    for (const auto& [w, e] : cert.powers.table)
        if (e == cert.powers.global_max) maximal.push_back(w);
    std::sort(maximal.begin(), maximal.end());
    for (std::size_t i = 0; i < maximal.size() && i < 8; ++i)
        rec["witnesses"].push_back({{"base", maximal[i]}, {"exponent", cert.powers.global_max}});
    sink.emit(rec);
    return kExitConsistent;
}

int cmd_scan(const std::string& path, long long window, const std::string& seed, const std::string& out,
             const ScanOptions& opt, long long auto_grow) {
    Substitution z = load_substitution(path);
    Emitter sink(out);
    std::vector<std::string> grow_log;
    long long w = window;

    if ((opt.kind == "abelian" || opt.kind == "powers") && !opt.coloring.empty())
        throw CLI::ValidationError("--coloring", "scan '" + opt.kind + "' does not take a coloring");

    for (;;) {
        auto u = make_window(z, w, seed);
        int code;
        if (opt.kind == "uniform") code = scan_uniform(u, opt, sink, grow_log);
        else if (opt.kind == "bounded-gap") code = scan_bounded_gap(u, opt, sink, grow_log);
        else if (opt.kind == "abelian") code = scan_abelian(u, opt, sink, grow_log);
        else if (opt.kind == "factorization") code = scan_factorization(u, opt, sink, grow_log);
        else if (opt.kind == "powers") code = scan_powers_cmd(u, opt, sink, grow_log);
        else throw CLI::ValidationError("scan", "unknown scan kind '" + opt.kind + "'");

        if (code != kExitWindowExhausted || auto_grow <= w) return code;
        w = std::min(auto_grow, w * 2);
        grow_log.push_back("auto-grow:window=" + std::to_string(w));
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-window analysis of primitive substitution fixed points:\n"
                 "cutting bars, recognizability, colorings and avoidance scanners."};
    app.require_subcommand(1);

    std::string path, seed, out;
    long long window = 65536;
    long long auto_grow = 0;

    auto add_common = [&](CLI::App* cmd, bool with_window) {
        cmd->add_option("file", path, "substitution file")->required();
        cmd->add_option("--seed", seed, "seed letter (default: first valid)");
        if (with_window)
            cmd->add_option("--window", window, "window length W")->check(CLI::Range(1024LL, (1LL << 62)));
    };

    auto* info = app.add_subcommand("info", "print substitution facts: images, primitivity, frequencies");
    info->add_option("file", path, "substitution file")->required();

    long long prefix_n = 64;
    auto* prefix = app.add_subcommand("prefix", "print the fixed point prefix u[1..n]");
    add_common(prefix, false);
    prefix->add_option("-n,--length", prefix_n, "prefix length")->check(CLI::PositiveNumber);

    long long trials = 2000;
    auto* analyze = app.add_subcommand("analyze", "recognizability certificates, shared-decomposition check, bars");
    add_common(analyze, true);
    analyze->add_option("--trials", trials, "sampled factor pairs for the shared-decomposition check");
    analyze->add_option("--out", out, "write JSON-lines certificates to this path");

    ScanOptions opt;
    auto* scan = app.add_subcommand("scan", "run an avoidance scanner and emit JSON-lines certificates");
    add_common(scan, true);
    scan->add_option("kind", opt.kind, "uniform | bounded-gap | abelian | factorization | powers")->required();
    scan->add_option("--coloring", opt.coloring,
                     "coloring spec: identity | uniform[:K=..,r=..] | frequency | factorization[:K=..]");
    scan->add_option("--out", out, "write JSON-lines certificates to this path");
    scan->add_option("-k", opt.k, "power order for uniform/abelian scans");
    scan->add_option("--min-len", opt.min_len, "least block length (uniform)");
    scan->add_option("--max-len", opt.max_len, "largest block length (uniform)");
    scan->add_option("--skip-multiples", opt.skip_multiples, "skip block lengths divisible by this (uniform)");
    scan->add_option("--p-bound", opt.p_bound, "strict part length bound (bounded-gap)");
    scan->add_option("--k-target", opt.k_target, "chain length target (bounded-gap)");
    scan->add_option("--max-part-len", opt.max_part_len, "largest part length (abelian)");
    scan->add_option("--max-base-len", opt.max_base_len, "largest base length (powers)");
    scan->add_option("--root-cap", opt.root_cap, "first-part length cap (factorization)");
    scan->add_option("--horizon", opt.horizon, "coverage horizon, default W (factorization)");
    scan->add_option("--auto-grow", auto_grow, "retry window-exhausted outcomes doubling W up to this cap");
    scan->add_option("--threads", opt.threads, "shard independent scan ranges across threads")
        ->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    try {
        if (info->parsed()) return cmd_info(path);
        if (prefix->parsed()) return cmd_prefix(path, prefix_n, seed);
        if (analyze->parsed()) return cmd_analyze(path, window, seed, out, trials);
        if (scan->parsed()) {
            if (opt.k == 0) opt.k = opt.kind == "abelian" ? 3 : 2;
            return cmd_scan(path, window, seed, out, opt, auto_grow);
        }
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInternal;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return kExitInternal + 1;
    }
    return kExitInternal;
}

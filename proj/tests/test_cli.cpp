#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <catch2/catch_amalgamated.hpp>
#include <nlohmann/json.hpp>

using nlohmann::json;

namespace {

struct CliResult {
    int exit_code;
    std::string out;
};

CliResult run_cli(const std::string& args) {
    std::string cmd = std::string(SUBSTWORDS_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
    int status = pclose(pipe);
    REQUIRE(WIFEXITED(status));
    return {WEXITSTATUS(status), out};
}

std::string data(const std::string& stem) { return std::string(TESTS_DATA_DIR) + "/" + stem + ".subst"; }

// JSON-lines records; analyze mixes human-readable lines into stdout, skip those.
std::vector<json> records(const std::string& out) {
    std::vector<json> recs;
    std::size_t pos = 0;
    while (pos < out.size()) {
        auto nl = out.find('\n', pos);
        if (nl == std::string::npos) nl = out.size();
        std::string line = out.substr(pos, nl - pos);
        pos = nl + 1;
        if (!line.empty() && line.front() == '{') recs.push_back(json::parse(line));
    }
    return recs;
}

json normalized(json j) {
    j.erase("elapsed_ms");
    return j;
}

} // namespace

TEST_CASE("cli prefix prints fixed point prefixes byte for byte", "[cli]") {
    struct Row {
        const char* stem;
        int n;
        const char* expect;
    };
    const Row rows[] = {
        {"ex1111", 20, "01001101010001001101"},
        {"dekking", 34, "aabcaabcbbcaccaabcaabcbbcaccbbcbbc"},
        {"thue_morse", 16, "0110100110010110"},
        {"fibonacci", 13, "0100101001001"},
    };
    for (const auto& r : rows) {
        auto res = run_cli("prefix " + data(r.stem) + " -n " + std::to_string(r.n));
        CHECK(res.exit_code == 0);
        CHECK(res.out == std::string(r.expect) + "\n");
    }
}

TEST_CASE("cli info reports primitivity, seeds, and frequencies", "[cli]") {
    auto dek = run_cli("info " + data("dekking"));
    CHECK(dek.exit_code == 0);
    CHECK(dek.out.find("constant length: no (max image length 4)") != std::string::npos);
    CHECK(dek.out.find("primitive: true") != std::string::npos);
    CHECK(dek.out.find("fixed point seeds: a,b") != std::string::npos);
    CHECK(dek.out.find("(algebraic)") != std::string::npos);
    CHECK(dek.out.find("a = 0.3247179572") != std::string::npos);
    CHECK(dek.out.find("b = 0.2451223338") != std::string::npos);
    CHECK(dek.out.find("c = 0.4301597090") != std::string::npos);

    auto tm = run_cli("info " + data("thue_morse"));
    CHECK(tm.exit_code == 0);
    CHECK(tm.out.find("(rational)") != std::string::npos);
    CHECK(tm.out.find("0 = 0.5000000000") != std::string::npos);
    CHECK(tm.out.find("1 = 0.5000000000") != std::string::npos);
}

TEST_CASE("cli analyze certifies recognizability and flags the failure case", "[cli]") {
    auto good = run_cli("analyze " + data("ex1111") + " --window 4096");
    CHECK(good.exit_code == 0);
    auto recs = records(good.out);
    REQUIRE(recs.size() == 3);
    CHECK(recs[0]["kind"] == "recognizability");
    CHECK(recs[0]["params"]["level"] == 1);
    CHECK(recs[0]["result"]["K_hat"] == 0);
    CHECK(recs[0]["result"]["cap_converged"] == true);
    CHECK(recs[1]["kind"] == "presuf");
    CHECK(recs[1]["outcome"] == "no-witness");
    CHECK(recs[1]["result"]["failures"] == 0);
    CHECK(recs[2]["params"]["level"] == 2);

    auto bad = run_cli("analyze " + data("fibonacci") + " --window 4096");
    CHECK(bad.exit_code == 2);
    auto brecs = records(bad.out);
    REQUIRE(brecs.size() == 3);
    CHECK(brecs[0]["result"]["cap_converged"] == false);
    CHECK(brecs[0]["flags"].front() == "estimator-bailed");
    CHECK(brecs[1]["outcome"] == "witness");
    CHECK(brecs[1]["result"]["failures"].get<long long>() > 0);
    CHECK(!brecs[1]["witnesses"].empty());
}

TEST_CASE("cli scan uniform reports witnesses and is thread deterministic", "[cli]") {
    auto hit = run_cli("scan " + data("thue_morse") +
                       " uniform -k 2 --min-len 1 --max-len 4 --coloring identity --window 2048");
    CHECK(hit.exit_code == 2);
    auto recs = records(hit.out);
    REQUIRE(recs.size() == 1);
    CHECK(recs[0]["outcome"] == "witness");
    CHECK(recs[0]["witnesses"][0]["pos"] == 2);
    CHECK(recs[0]["witnesses"][0]["len"] == 1);
    CHECK(recs[0]["witnesses"][0]["color"] == "lit:1");

    std::string base = "scan " + data("ex1111") +
                       " uniform -k 4 --min-len 1 --max-len 24 --coloring identity --window 16384";
    auto one = run_cli(base + " --threads 1");
    auto three = run_cli(base + " --threads 3");
    CHECK(one.exit_code == 0);
    CHECK(three.exit_code == 0);
    auto r1 = records(one.out);
    auto r3 = records(three.out);
    REQUIRE(r1.size() == 1);
    REQUIRE(r3.size() == 1);
    CHECK(normalized(r1[0]) == normalized(r3[0]));
    CHECK(r1[0]["outcome"] == "no-witness");
}

TEST_CASE("cli scan exhausts the window and auto-grows past it", "[cli]") {
    auto tight = run_cli("scan " + data("dekking") + " abelian -k 3 --max-part-len 400 --window 1024");
    CHECK(tight.exit_code == 3);
    auto trecs = records(tight.out);
    REQUIRE(trecs.size() == 1);
    CHECK(trecs[0]["outcome"] == "window-exhausted");
    CHECK(trecs[0]["flags"].front() == "window-exhausted:part_len>=342");

    auto grown =
        run_cli("scan " + data("dekking") + " abelian -k 3 --max-part-len 400 --window 1024 --auto-grow 4096");
    CHECK(grown.exit_code == 0);
    auto grecs = records(grown.out);
    REQUIRE(grecs.size() == 2);
    CHECK(grecs[0]["window"] == 1024);
    CHECK(grecs[0]["outcome"] == "window-exhausted");
    CHECK(grecs[1]["window"] == 2048);
    CHECK(grecs[1]["outcome"] == "no-witness");
    CHECK(grecs[1]["flags"].front() == "auto-grow:window=2048");
}

TEST_CASE("cli scan bounded-gap reproduces the per-color chain maxima", "[cli]") {
    auto res = run_cli("scan " + data("dekking") + " bounded-gap --p-bound 30 --k-target 25 --window 65536");
    CHECK(res.exit_code == 0);
    auto recs = records(res.out);
    REQUIRE(recs.size() == 1);
    CHECK(recs[0]["outcome"] == "no-witness");
    CHECK(recs[0]["result"]["max_k"] == 19);
    const std::map<std::string, long long> expect = {{"set:{a}", 19}, {"set:{b}", 10}, {"set:{ab}", 8},
                                                     {"set:{c}", 6},  {"set:{ac}", 13}, {"set:{bc}", 12}};
    CHECK(recs[0]["result"]["per_color"].get<std::map<std::string, long long>>() == expect);
}

TEST_CASE("cli scan factorization emits one stuck certificate per color", "[cli]") {
    auto res = run_cli("scan " + data("ex1111") + " factorization --window 10000 --root-cap 256");
    CHECK(res.exit_code == 0);
    auto recs = records(res.out);
    REQUIRE(recs.size() == 33);
    long long max_nodes = 0, max_pos = 0;
    for (const auto& r : recs) {
        CHECK(r["kind"] == "factorization");
        CHECK(r["outcome"] == "stuck");
        CHECK(r["params"]["K"] == 0);
        max_nodes = std::max(max_nodes, r["result"]["nodes"].get<long long>());
        max_pos = std::max(max_pos, r["result"]["max_position"].get<long long>());
    }
    CHECK(max_nodes == 247);
    CHECK(max_pos == 271);
}

TEST_CASE("cli scan powers tabulates maximal exponents", "[cli]") {
    auto tm = run_cli("scan " + data("thue_morse") + " powers --max-base-len 8 --window 4096");
    CHECK(tm.exit_code == 0);
    auto trecs = records(tm.out);
    REQUIRE(trecs.size() == 1);
    CHECK(trecs[0]["outcome"] == "table");
    CHECK(trecs[0]["result"]["global_max"] == 2);
    CHECK(trecs[0]["result"]["k0"] == 3);

    auto ex = run_cli("scan " + data("ex1111") + " powers --max-base-len 4 --window 4096");
    CHECK(ex.exit_code == 0);
    auto erecs = records(ex.out);
    REQUIRE(erecs.size() == 1);
    CHECK(erecs[0]["result"]["global_max"] == 3);
    CHECK(erecs[0]["result"]["k0"] == 4);
    bool has_zero = false;
    for (const auto& w : erecs[0]["witnesses"])
        if (w["base"] == "0" && w["exponent"] == 3) has_zero = true;
    CHECK(has_zero);
}

TEST_CASE("cli --out writes the records to a file instead of stdout", "[cli]") {
    auto path = std::filesystem::temp_directory_path() / "substwords_cli_out.jsonl";
    std::filesystem::remove(path);
    auto res = run_cli("scan " + data("thue_morse") + " powers --max-base-len 4 --window 2048 --out " +
                       path.string());
    CHECK(res.exit_code == 0);
    CHECK(res.out.empty());
    std::ifstream in(path);
    REQUIRE(in.good());
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(json::parse(line)["kind"] == "powers");
    std::filesystem::remove(path);
}

TEST_CASE("cli rejects bad usage without claiming a scan result", "[cli]") {
    auto missing = run_cli("info /nonexistent/path.subst");
    CHECK(missing.exit_code == 10);

    auto small = run_cli("analyze " + data("ex1111") + " --window 512");
    CHECK(small.exit_code != 0);
    CHECK(small.exit_code != 2);
    CHECK(small.exit_code != 3);

    auto colored = run_cli("scan " + data("ex1111") + " powers --coloring identity --window 2048");
    CHECK(colored.exit_code != 0);
    CHECK(colored.exit_code != 2);
    CHECK(records(colored.out).empty());

    auto bare = run_cli("");
    CHECK(bare.exit_code != 0);
}

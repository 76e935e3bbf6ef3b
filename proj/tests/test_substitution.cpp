#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <substwords/substitution.hpp>

using namespace substwords;

namespace {

Substitution load(const std::string& stem) {
    std::ifstream in(std::string(TESTS_DATA_DIR) + "/" + stem + ".subst");
    REQUIRE(in.good());
    return parse_substitution(in, stem);
}

} // namespace

TEST_CASE("parsing substitution files") {
    auto tm = load("thue_morse");
    CHECK(tm.alphabet().str() == "01");
    CHECK(tm.image('0') == "01");
    CHECK(tm.image('1') == "10");
    CHECK(tm.name() == "thue_morse");

    auto dk = load("dekking");
    CHECK(dk.alphabet().str() == "abc");
    CHECK(dk.image('c') == "acc");

    SECTION("whitespace, comments, blank lines") {
        auto z = parse_substitution_text("\n  # heading\n 0 ->  01 # trailing\n\n1 -> 0\n");
        CHECK(z.alphabet().str() == "01");
        CHECK(z.image('0') == "01");
        CHECK(z.image('1') == "0");
    }
    SECTION("errors carry line numbers") {
        CHECK_THROWS_AS(parse_substitution_text("0 -> 01\n0 -> 10\n"), ParseError);
        CHECK_THROWS_AS(parse_substitution_text("0 -> 01\n1 -> 02\n"), ParseError);
        CHECK_THROWS_AS(parse_substitution_text("0 => 01\n"), ParseError);
        CHECK_THROWS_AS(parse_substitution_text("01 -> 01\n"), ParseError);
        CHECK_THROWS_AS(parse_substitution_text("0 -> 01 junk\n"), ParseError);
        CHECK_THROWS_AS(parse_substitution_text("# nothing\n"), ParseError);
        try {
            parse_substitution_text("0 -> 01\n1 -> 02\n");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line == 2);
        }
    }
}

TEST_CASE("applying substitutions") {
    auto dk = load("dekking");
    CHECK(dk.apply("ab") == "aabcbbc");
    CHECK(dk.apply("") == "");

    auto tm = load("thue_morse");
    CHECK(tm.apply("0") == "01");
    CHECK(tm.power(2).image('0') == "0110");
    CHECK(tm.power(0).image('0') == "0");
    CHECK(tm.power(0).image('1') == "1");

    auto ex = load("ex1111");
    CHECK(ex.power(2).image('0') == "0100110101000100");
    CHECK(ex.power(1).image('0') == ex.image('0'));
    CHECK_THROWS_AS(tm.power(-1), Error);
}

TEST_CASE("constant length detection") {
    CHECK(load("thue_morse").constant_length() == 2);
    CHECK(load("ex1111").constant_length() == 4);
    CHECK(load("dekking").constant_length() == std::nullopt);
    CHECK(load("fibonacci").constant_length() == std::nullopt);
    CHECK(load("zeta_j").constant_length() == 5);
}

TEST_CASE("incidence matrices") {
    auto tm = load("thue_morse");
    auto m = incidence_matrix(tm);
    CHECK(m.at(0, 0) == 1);
    CHECK(m.at(0, 1) == 1);
    CHECK(m.at(1, 0) == 1);
    CHECK(m.at(1, 1) == 1);

    auto dk = load("dekking");
    auto d = incidence_matrix(dk);
    // rows a,b,c by columns a,b,c
    std::vector<long long> want{2, 0, 1, 1, 2, 0, 1, 1, 2};
    CHECK(d.e == want);

    SECTION("matrix powers track substitution powers") {
        auto p3 = incidence_matrix(dk.power(3));
        CHECK(d.pow(3) == p3);
        CHECK(d.pow(0) == IncidenceMatrix::identity(3));
    }
}

TEST_CASE("parikh vector of an image is the matrix action", "[property]") {
    std::mt19937_64 rng(99);
    for (const char* stem : {"thue_morse", "dekking", "fibonacci", "tribonacci"}) {
        auto z = load(stem);
        auto m = incidence_matrix(z);
        for (int trial = 0; trial < 20; ++trial) {
            std::string w;
            int n = static_cast<int>(rng() % 30);
            for (int i = 0; i < n; ++i)
                w += z.alphabet().letter(static_cast<int>(rng() % static_cast<unsigned long long>(z.alphabet().size())));
            CHECK(parikh(z.alphabet(), z.apply(w)) == m.mul(parikh(z.alphabet(), w)));
        }
    }
}

TEST_CASE("image length tables match materialized powers") {
    auto fib = load("fibonacci");
    auto t = fib.image_length_table(10);
    CHECK(t[0] == static_cast<long long>(fib.power(10).image('0').size()));
    CHECK(t[1] == static_cast<long long>(fib.power(10).image('1').size()));
    // Fibonacci numbers: |zeta^10(0)| = F_12 = 144
    CHECK(t[0] == 144);
    CHECK(load("ex1111").image_length_table(6)[0] == 4096);
    CHECK(load("dekking").image_length_table(0) == std::vector<long long>{1, 1, 1});
}

TEST_CASE("primitivity check") {
    CHECK(is_primitive(load("thue_morse")).primitive);
    CHECK(is_primitive(load("thue_morse")).witness_n == 1);
    CHECK(is_primitive(load("zeta_j")).witness_n == 1);

    auto dk = is_primitive(load("dekking"));
    CHECK(dk.primitive);
    CHECK(dk.witness_n == 2);

    auto fib = is_primitive(load("fibonacci"));
    CHECK(fib.primitive);
    CHECK(fib.witness_n == 2);

    CHECK(is_primitive(load("tribonacci")).primitive);

    auto sq = is_primitive(load("squares"));
    CHECK_FALSE(sq.primitive);
    // the stable zero pattern is block diagonal: letters never mix
    CHECK(sq.pattern == std::vector<uint8_t>{1, 0, 0, 1});

    SECTION("witness is exact") {
        auto z = load("dekking");
        auto m = incidence_matrix(z);
        CHECK(m.pow(2).all_positive());
        CHECK_FALSE(m.pow(1).all_positive());
    }
}

TEST_CASE("fixed point seeds") {
    CHECK(load("thue_morse").fixed_point_seeds() == std::vector<char>{'0', '1'});
    CHECK(load("fibonacci").fixed_point_seeds() == std::vector<char>{'0'});
    CHECK(load("dekking").fixed_point_seeds() == std::vector<char>{'a', 'b'});
    CHECK(load("tribonacci").fixed_point_seeds() == std::vector<char>{'1'});
    auto none = parse_substitution_text("0 -> 10\n1 -> 01\n");
    CHECK(none.fixed_point_seeds().empty());
    CHECK_THROWS_AS(FixedPointWindow::create(none, 16), NoSeed);
    CHECK_THROWS_AS(FixedPointWindow::create(load("fibonacci"), '1', 16), NoSeed);
}

TEST_CASE("fixed point windows materialize the right prefix") {
    auto tm = FixedPointWindow::create(load("thue_morse"), '0', 16);
    CHECK(tm.view() == "0110100110010110");
    CHECK(tm.size() == 16);
    CHECK(tm.seed() == '0');

    auto tm1 = FixedPointWindow::create(load("thue_morse"), '1', 16);
    CHECK(tm1.view() == "1001011001101001");

    auto ex = FixedPointWindow::create(load("ex1111"), '0', 20);
    CHECK(ex.view() == "01001101010001001101");

    auto dk = FixedPointWindow::create(load("dekking"), 'a', 34);
    CHECK(dk.view() == "aabcaabcbbcaccaabcaabcbbcaccbbcbbc");

    auto fib = FixedPointWindow::create(load("fibonacci"), '0', 21);
    CHECK(fib.view() == "010010100100101001010");

    auto zj = FixedPointWindow::create(load("zeta_j"), '0', 25);
    CHECK(zj.view() == "0000100001000010000111110");

    SECTION("window of length 1 is the seed") {
        CHECK(FixedPointWindow::create(load("fibonacci"), '0', 1).view() == "0");
    }
}

TEST_CASE("window access, segments, occurrences") {
    auto tm = FixedPointWindow::create(load("thue_morse"), '0', 8);
    CHECK(tm.at(1) == '0');
    CHECK(tm.at(8) == '1');
    CHECK_THROWS_AS(tm.at(0), WindowExhausted);
    CHECK_THROWS_AS(tm.at(9), WindowExhausted);
    CHECK(tm.segment({2, 5}) == "1101");
    CHECK(tm.segment({1, 8}) == "01101001");
    CHECK_THROWS_AS(tm.segment({2, 9}), WindowExhausted);
    CHECK(tm.occurrences("01") == std::vector<long long>{1, 4, 7});
    CHECK(tm.occurrences("1001") == std::vector<long long>{5});
    CHECK(tm.occurrences("111").empty());
    CHECK_THROWS_AS(tm.occurrences(""), EmptyWord);
}

TEST_CASE("prefix match lengths come from the z array") {
    auto tm = FixedPointWindow::create(load("thue_morse"), '0', 8);
    CHECK(tm.prefix_match(0).t == 8);
    CHECK(tm.prefix_match(0).window_capped);
    CHECK(tm.prefix_match(1).t == 0);
    CHECK(tm.prefix_match(3).t == 2);
    CHECK(tm.prefix_match(5).t == 1);
    CHECK_FALSE(tm.prefix_match(3).window_capped);
    CHECK_THROWS_AS(tm.prefix_match(8), WindowExhausted);
}

TEST_CASE("extension preserves the old prefix", "[property]") {
    for (const char* stem : {"thue_morse", "fibonacci", "dekking", "tribonacci", "zeta_j"}) {
        auto z = load(stem);
        auto w1 = FixedPointWindow::create(z, 100);
        auto w2 = w1.extend(1000);
        CHECK(w2.size() == 1000);
        CHECK(w2.view().substr(0, 100) == w1.view());
        CHECK(w2.extend(50).size() == 1000); // never shrinks

        // the window is a prefix of its own image
        auto img = z.apply(w1.view());
        CHECK(std::string_view(img).substr(0, 100) == w1.view());
    }
}

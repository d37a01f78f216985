#include "cdmetrics/formats.hpp"
#include "cdmetrics/parser.hpp"

#include "../support/generators.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace cdm;

namespace {

const std::filesystem::path kData = CDM_TEST_DATA_DIR;

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

SourceSpan span_of(std::string_view text) {
    try {
        (void)parse(text);
    } catch (const SyntaxError& e) {
        return e.span();
    }
    FAIL("expected a SyntaxError for: " << text);
    return {};
}

} // namespace

TEST_CASE("class body lines") {
    const auto d = parse("class A { attr x\n attr y\n method m }");
    REQUIRE(d.classes.size() == 1);
    CHECK(d.classes[0].name == "A");
    CHECK(d.classes[0].attributes == std::vector<std::string>{"x", "y"});
    CHECK(d.classes[0].methods == std::vector<std::string>{"m"});
    CHECK(d.id == "unnamed");
}

TEST_CASE("one generalization") {
    const auto d = parse("class A {}\nclass B {}\ngen B => A");
    REQUIRE(d.classes.size() == 2);
    REQUIRE(d.relationships.size() == 1);
    CHECK(d.relationships[0] == Relationship{RelationKind::Generalization, "B", "A"});
}

TEST_CASE("malformed arrow") {
    CHECK(span_of("assoc A --> B") == SourceSpan{1, 9});
}

TEST_CASE("every arrow kind") {
    const auto d = parse("assoc A -- B\nagg A o- B\ndep A -> B\ngen A => B\n");
    REQUIRE(d.relationships.size() == 4);
    CHECK(d.relationships[0].kind == RelationKind::Association);
    CHECK(d.relationships[1].kind == RelationKind::Aggregation);
    CHECK(d.relationships[2].kind == RelationKind::Dependency);
    CHECK(d.relationships[3].kind == RelationKind::Generalization);
}

TEST_CASE("parse does not validate") {
    CHECK_NOTHROW((void)parse("gen A => A\nassoc X -- Y\n"));
}

TEST_CASE("empty and comment-only sources") {
    CHECK(parse("") == ClassDiagram{});
    CHECK(parse("\n\n# nothing\n   \n") == ClassDiagram{});
    CHECK(parse("# header comment\ndiagram D1\n").id == "D1");
}

TEST_CASE("serialize empty diagram") {
    CHECK(serialize(ClassDiagram{}) == "diagram unnamed\n");
}

TEST_CASE("golden canonical serialization") {
    const auto source = slurp(kData / "all_kinds.cd");
    const auto golden = slurp(kData / "all_kinds.golden.cd");
    const auto parsed = parse(source);
    CHECK(serialize(parsed) == golden);
    CHECK(parse(golden) == canonical_order(parsed));
}

TEST_CASE("error corpus spans") {
    const auto manifest = read_delimited(slurp(kData / "errors" / "manifest.csv"));
    REQUIRE(manifest.rows.size() >= 10);
    for (const auto& row : manifest.rows) {
        CAPTURE(row[0]);
        const SourceSpan expected{std::stoi(row[1]), std::stoi(row[2])};
        CHECK(span_of(slurp(kData / "errors" / row[0])) == expected);
    }
}

TEST_CASE("comments and whitespace do not change the parsed value") {
    const auto plain = parse("diagram D\nclass A {\nattr x\n}\nclass B {}\nassoc A -- B\n");
    const auto noisy = parse(
        "  # lead\r\n\tdiagram   D # id\r\n\r\nclass  A\t{   # open\n   attr x#c\n  }  \n\nclass B{}\n  assoc A  --  B   \n#");
    CHECK(plain == noisy);
}

TEST_CASE("property: parse . serialize is identity on canonical diagrams") {
    std::mt19937 rng(2024);
    for (int trial = 0; trial < 500; ++trial) {
        const auto d = canonical_order(testing::random_diagram(rng));
        CHECK(parse(serialize(d)) == d);
    }
}

TEST_CASE("property: parsing is total") {
    // Mutated fragments of valid text either parse or raise a SyntaxError
    // whose span lies inside the input.
    std::mt19937 rng(99);
    const std::string alphabet = "classtrmehodgnpv{}-=>o#_ AB\n\r\t9";
    for (int trial = 0; trial < 2000; ++trial) {
        std::string text = serialize(testing::random_diagram(rng, 4));
        std::uniform_int_distribution<std::size_t> at(0, text.size() - 1);
        std::uniform_int_distribution<std::size_t> ch(0, alphabet.size() - 1);
        for (int k = 0; k < 3; ++k) {
            text[at(rng)] = alphabet[ch(rng)];
        }
        try {
            (void)parse(text);
        } catch (const SyntaxError& e) {
            const int lines = 1 + static_cast<int>(std::count(text.begin(), text.end(), '\n'));
            CHECK(e.span().line >= 1);
            CHECK(e.span().line <= lines);
            CHECK(e.span().column >= 1);
        }
    }
}

TEST_CASE("structured data round trip") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const auto d = testing::random_diagram(rng);
        CHECK(parse_json(to_json(d)) == d);
    }
}

TEST_CASE("structured data field names") {
    const auto d = parse_json(R"({"id": "X", "classes": [{"name": "A", "attributes": ["a"], "methods": []},
                                  {"name": "B"}],
                                  "relationships": [{"kind": "Generalization", "from": "B", "to": "A"}]})");
    CHECK(d.id == "X");
    REQUIRE(d.classes.size() == 2);
    CHECK(d.classes[0].attributes == std::vector<std::string>{"a"});
    CHECK(d.relationships.at(0) == Relationship{RelationKind::Generalization, "B", "A"});

    CHECK_THROWS_AS((void)parse_json(R"({"relationships": [{"kind": "Inherits", "from": "B", "to": "A"}]})"),
                    SyntaxError);
    CHECK_THROWS_AS((void)parse_json("{\n  \"id\": }"), SyntaxError);
    try {
        (void)parse_json("{\n  \"id\": }");
    } catch (const SyntaxError& e) {
        CHECK(e.span().line == 2);
    }
}

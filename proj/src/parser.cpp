#include "cdmetrics/parser.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <optional>
#include <utility>
#include <vector>

namespace cdm {

SyntaxError::SyntaxError(SourceSpan span, std::string message)
    : Error(fmt::format("{}:{}: {}", span.line, span.column, message)), span_(span), reason_(std::move(message)) {}

namespace {

struct Token {
    std::string_view text;
    int column;
};

// Splits on spaces/tabs; braces are always tokens of their own so that
// `class A {}` and `method m }` both work.
std::vector<Token> tokenize(std::string_view line) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        const char c = line[i];
        if (c == ' ' || c == '\t') {
            ++i;
            continue;
        }
        if (c == '{' || c == '}') {
            tokens.push_back({line.substr(i, 1), static_cast<int>(i) + 1});
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '{' && line[j] != '}') {
            ++j;
        }
        tokens.push_back({line.substr(i, j - i), static_cast<int>(i) + 1});
        i = j;
    }
    return tokens;
}

struct Arrow {
    std::string_view keyword;
    std::string_view arrow;
    RelationKind kind;
};

constexpr std::array<Arrow, 4> kArrows{{
    {"assoc", "--", RelationKind::Association},
    {"agg", "o-", RelationKind::Aggregation},
    {"dep", "->", RelationKind::Dependency},
    {"gen", "=>", RelationKind::Generalization},
}};

const Arrow* find_arrow(std::string_view keyword) {
    for (const auto& a : kArrows) {
        if (a.keyword == keyword) {
            return &a;
        }
    }
    return nullptr;
}

const Arrow& arrow_for(RelationKind kind) {
    for (const auto& a : kArrows) {
        if (a.kind == kind) {
            return a;
        }
    }
    return kArrows.front();
}

class Parser {
public:
    explicit Parser(std::string_view source) : source_(source) {}

    ClassDiagram run() {
        std::size_t pos = 0;
        while (pos <= source_.size()) {
            std::size_t end = source_.find('\n', pos);
            if (end == std::string_view::npos) {
                end = source_.size();
            }
            std::string_view line = source_.substr(pos, end - pos);
            ++line_no_;
            if (!line.empty() && line.back() == '\r') {
                line.remove_suffix(1);
            }
            if (auto hash = line.find('#'); hash != std::string_view::npos) {
                line = line.substr(0, hash);
            }
            line_length_ = static_cast<int>(line.size());
            handle_line(tokenize(line));
            if (end == source_.size()) {
                break;
            }
            pos = end + 1;
        }
        if (open_class_) {
            throw SyntaxError(open_span_, fmt::format("unterminated body of class '{}'", current().name));
        }
        return std::move(diagram_);
    }

private:
    [[noreturn]] void fail(int column, std::string message) const {
        throw SyntaxError({line_no_, column}, std::move(message));
    }

    int end_column() const { return line_length_ + 1; }

    std::string identifier(const std::vector<Token>& tokens, std::size_t at, std::string_view what) const {
        if (at >= tokens.size()) {
            fail(end_column(), fmt::format("expected {}", what));
        }
        const Token& tok = tokens[at];
        if (!is_identifier(tok.text)) {
            fail(tok.column, fmt::format("illegal identifier '{}' for {}", tok.text, what));
        }
        return std::string(tok.text);
    }

    void expect_end(const std::vector<Token>& tokens, std::size_t at) const {
        if (at < tokens.size()) {
            fail(tokens[at].column, fmt::format("unexpected token '{}'", tokens[at].text));
        }
    }

    ClassDecl& current() { return diagram_.classes.back(); }

    void handle_line(const std::vector<Token>& tokens) {
        if (tokens.empty()) {
            return;
        }
        if (open_class_) {
            handle_body(tokens, 0);
            return;
        }
        const Token& head = tokens.front();
        if (head.text == "diagram") {
            if (seen_declaration_) {
                fail(head.column, "'diagram' header must be the first declaration and appear at most once");
            }
            diagram_.id = identifier(tokens, 1, "diagram id");
            expect_end(tokens, 2);
        } else if (head.text == "class") {
            handle_class(tokens);
        } else if (const Arrow* arrow = find_arrow(head.text)) {
            handle_relation(tokens, *arrow);
        } else {
            fail(head.column, fmt::format("unknown keyword '{}'", head.text));
        }
        seen_declaration_ = true;
    }

    void handle_class(const std::vector<Token>& tokens) {
        ClassDecl cls;
        cls.name = identifier(tokens, 1, "class name");
        if (tokens.size() < 3 || tokens[2].text != "{") {
            fail(tokens.size() < 3 ? end_column() : tokens[2].column, "expected '{' after class name");
        }
        diagram_.classes.push_back(std::move(cls));
        open_class_ = true;
        open_span_ = {line_no_, tokens.front().column};
        if (tokens.size() > 3) {
            handle_body(tokens, 3);
        }
    }

    // A body line is a member declaration, a lone `}`, or a member
    // declaration followed by `}`.
    void handle_body(const std::vector<Token>& tokens, std::size_t at) {
        const Token& head = tokens[at];
        if (head.text == "}") {
            expect_end(tokens, at + 1);
            open_class_ = false;
            return;
        }
        std::vector<std::string>* target = nullptr;
        if (head.text == "attr") {
            target = &current().attributes;
        } else if (head.text == "method") {
            target = &current().methods;
        } else {
            fail(head.column, fmt::format("expected 'attr', 'method' or '}}' in class body, got '{}'", head.text));
        }
        target->push_back(identifier(tokens, at + 1, head.text == "attr" ? "attribute name" : "method name"));
        if (at + 2 < tokens.size()) {
            if (tokens[at + 2].text != "}") {
                fail(tokens[at + 2].column, fmt::format("unexpected token '{}'", tokens[at + 2].text));
            }
            expect_end(tokens, at + 3);
            open_class_ = false;
        }
    }

    void handle_relation(const std::vector<Token>& tokens, const Arrow& arrow) {
        Relationship rel;
        rel.kind = arrow.kind;
        rel.from = identifier(tokens, 1, "class name");
        if (tokens.size() < 3) {
            fail(end_column(), fmt::format("expected '{}'", arrow.arrow));
        }
        if (tokens[2].text != arrow.arrow) {
            fail(tokens[2].column, fmt::format("malformed arrow '{}', expected '{}'", tokens[2].text, arrow.arrow));
        }
        rel.to = identifier(tokens, 3, "class name");
        expect_end(tokens, 4);
        diagram_.relationships.push_back(std::move(rel));
    }

    std::string_view source_;
    ClassDiagram diagram_;
    int line_no_ = 0;
    int line_length_ = 0;
    bool seen_declaration_ = false;
    bool open_class_ = false;
    SourceSpan open_span_;
};

int kind_rank(RelationKind kind) {
    switch (kind) {
    case RelationKind::Association:
        return 0;
    case RelationKind::Aggregation:
        return 1;
    case RelationKind::Dependency:
        return 2;
    case RelationKind::Generalization:
        return 3;
    }
    return 4;
}

std::optional<RelationKind> kind_from_string(std::string_view text) {
    for (auto kind : {RelationKind::Association, RelationKind::Aggregation, RelationKind::Dependency,
                      RelationKind::Generalization}) {
        if (to_string(kind) == text) {
            return kind;
        }
    }
    return std::nullopt;
}

SourceSpan span_at_offset(std::string_view text, std::size_t offset) {
    SourceSpan span;
    offset = std::min(offset, text.size());
    for (std::size_t i = 0; i < offset; ++i) {
        if (text[i] == '\n') {
            ++span.line;
            span.column = 1;
        } else {
            ++span.column;
        }
    }
    return span;
}

} // namespace

ClassDiagram parse(std::string_view source) {
    return Parser(source).run();
}

ClassDiagram canonical_order(ClassDiagram diagram) {
    std::stable_sort(diagram.relationships.begin(), diagram.relationships.end(),
                     [](const Relationship& a, const Relationship& b) { return kind_rank(a.kind) < kind_rank(b.kind); });
    return diagram;
}

std::string serialize(const ClassDiagram& diagram) {
    std::string out = fmt::format("diagram {}\n", diagram.id);
    for (const auto& cls : diagram.classes) {
        if (cls.attributes.empty() && cls.methods.empty()) {
            out += fmt::format("class {} {{}}\n", cls.name);
            continue;
        }
        out += fmt::format("class {} {{\n", cls.name);
        for (const auto& a : cls.attributes) {
            out += fmt::format("  attr {}\n", a);
        }
        for (const auto& m : cls.methods) {
            out += fmt::format("  method {}\n", m);
        }
        out += "}\n";
    }
    for (const auto& rel : canonical_order(diagram).relationships) {
        const Arrow& a = arrow_for(rel.kind);
        out += fmt::format("{} {} {} {}\n", a.keyword, rel.from, a.arrow, rel.to);
    }
    return out;
}

ClassDiagram parse_json(std::string_view text) {
    using nlohmann::json;
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw SyntaxError(span_at_offset(text, e.byte == 0 ? 0 : e.byte - 1), e.what());
    }

    auto bad = [](std::string message) { return SyntaxError({1, 1}, std::move(message)); };
    auto string_list = [&](const json& node, const std::string& key) {
        std::vector<std::string> out;
        if (!node.contains(key)) {
            return out;
        }
        const json& arr = node.at(key);
        if (!arr.is_array()) {
            throw bad(fmt::format("'{}' must be an array", key));
        }
        for (const auto& item : arr) {
            if (!item.is_string()) {
                throw bad(fmt::format("'{}' entries must be strings", key));
            }
            out.push_back(item.get<std::string>());
        }
        return out;
    };
    auto string_field = [&](const json& node, const std::string& key) {
        if (!node.is_object() || !node.contains(key) || !node.at(key).is_string()) {
            throw bad(fmt::format("missing string field '{}'", key));
        }
        return node.at(key).get<std::string>();
    };

    if (!doc.is_object()) {
        throw bad("diagram document must be an object");
    }
    ClassDiagram diagram;
    if (doc.contains("id")) {
        diagram.id = string_field(doc, "id");
    }
    if (doc.contains("classes")) {
        if (!doc.at("classes").is_array()) {
            throw bad("'classes' must be an array");
        }
        for (const auto& node : doc.at("classes")) {
            ClassDecl cls;
            cls.name = string_field(node, "name");
            cls.attributes = string_list(node, "attributes");
            cls.methods = string_list(node, "methods");
            diagram.classes.push_back(std::move(cls));
        }
    }
    if (doc.contains("relationships")) {
        if (!doc.at("relationships").is_array()) {
            throw bad("'relationships' must be an array");
        }
        for (const auto& node : doc.at("relationships")) {
            const std::string kind = string_field(node, "kind");
            auto parsed = kind_from_string(kind);
            if (!parsed) {
                throw bad(fmt::format("unknown relationship kind '{}'", kind));
            }
            diagram.relationships.push_back(Relationship{*parsed, string_field(node, "from"), string_field(node, "to")});
        }
    }
    return diagram;
}

std::string to_json(const ClassDiagram& diagram) {
    using nlohmann::ordered_json;
    ordered_json doc;
    doc["id"] = diagram.id;
    doc["classes"] = ordered_json::array();
    for (const auto& cls : diagram.classes) {
        doc["classes"].push_back({{"name", cls.name}, {"attributes", cls.attributes}, {"methods", cls.methods}});
    }
    doc["relationships"] = ordered_json::array();
    for (const auto& rel : diagram.relationships) {
        doc["relationships"].push_back({{"kind", to_string(rel.kind)}, {"from", rel.from}, {"to", rel.to}});
    }
    return doc.dump(2) + "\n";
}

} // namespace cdm

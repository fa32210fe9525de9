#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "rail/dsl.hpp"

namespace rail {

const char* parse_code_name(ParseCode code) {
    switch (code) {
        case ParseCode::Syntax: return "SYNTAX";
        case ParseCode::BadNumber: return "BAD_NUMBER";
        case ParseCode::DuplicateId: return "DUP_ID";
        case ParseCode::DuplicateConnection: return "DUP_CONNECTION";
        case ParseCode::MissingConnection: return "NO_CONNECTION";
        case ParseCode::SegSelfLoop: return "SEG_SELF_LOOP";
        case ParseCode::UnknownRef: return "UNKNOWN_REF";
        case ParseCode::UnknownParam: return "UNKNOWN_PARAM";
    }
    return "UNKNOWN";
}

namespace {

struct Token {
    enum class Kind { Ident, Number, Punct, End };
    Kind kind = Kind::End;
    std::string text;
    SourceSpan span;
};

bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

// Tokenizes one line. Numbers keep fraction/decimal suffixes; a bare digit
// run can serve as an identifier, the grammar slot decides.
std::vector<Token> lex_line(const std::string& line, int line_no, size_t line_offset,
                            std::vector<ParseError>& errors) {
    std::vector<Token> out;
    size_t i = 0;
    auto span_at = [&](size_t col) {
        return SourceSpan{line_no, static_cast<int>(col + 1), line_offset + col};
    };
    while (i < line.size()) {
        char c = line[i];
        if (c == '#') break;
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        size_t start = i;
        if (std::isdigit(static_cast<unsigned char>(c))) {
            while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) ++i;
            bool is_number_like = true;
            if (i < line.size() && (line[i] == '.' || line[i] == '/')) {
                char sep = line[i];
                size_t j = i + 1;
                size_t digits = 0;
                while (j < line.size() && std::isdigit(static_cast<unsigned char>(line[j]))) {
                    ++j;
                    ++digits;
                }
                if (digits > 0 && sep == '.') {
                    i = j;
                } else if (digits > 0 && sep == '/') {
                    i = j;
                } else if (sep == '.') {
                    errors.push_back({span_at(start), ParseCode::BadNumber, "malformed number"});
                    i = j;
                    is_number_like = false;
                }
                // a bare '/' with no digits is left for the next token
            } else if (i < line.size() && ident_char(line[i])) {
                // digits followed by letters: treat as identifier (e.g. "3a")
                while (i < line.size() && ident_char(line[i])) ++i;
                out.push_back({Token::Kind::Ident, line.substr(start, i - start), span_at(start)});
                continue;
            }
            if (is_number_like)
                out.push_back({Token::Kind::Number, line.substr(start, i - start), span_at(start)});
            continue;
        }
        if (ident_char(c)) {
            while (i < line.size() && ident_char(line[i])) ++i;
            out.push_back({Token::Kind::Ident, line.substr(start, i - start), span_at(start)});
            continue;
        }
        auto two = line.substr(i, 2);
        auto three = line.substr(i, 3);
        if (three == "<->") {
            out.push_back({Token::Kind::Punct, "<->", span_at(start)});
            i += 3;
            continue;
        }
        if (two == "--" || two == "->" || two == "<=" || two == ">=") {
            out.push_back({Token::Kind::Punct, two, span_at(start)});
            i += 2;
            continue;
        }
        std::string one(1, c);
        if (one == "=" || one == "<" || one == ">" || one == ":" || one == "{" || one == "}" ||
            one == "|" || one == "[" || one == "]" || one == "(" || one == ")" || one == ",") {
            out.push_back({Token::Kind::Punct, one, span_at(start)});
            ++i;
            continue;
        }
        errors.push_back({span_at(start), ParseCode::Syntax, "unexpected character '" + one + "'"});
        ++i;
    }
    return out;
}

struct LineParser {
    const std::vector<Token>& toks;
    size_t pos = 0;
    std::vector<ParseError>& errors;
    SourceSpan line_span;
    bool failed = false;

    const Token* peek() const { return pos < toks.size() ? &toks[pos] : nullptr; }
    SourceSpan here() const { return pos < toks.size() ? toks[pos].span : line_span; }

    void fail(ParseCode code, const std::string& msg) {
        if (!failed) errors.push_back({here(), code, msg});
        failed = true;
    }
    std::optional<Token> take() {
        if (pos < toks.size()) return toks[pos++];
        fail(ParseCode::Syntax, "unexpected end of line");
        return std::nullopt;
    }
    // A name slot: identifier or bare number used as an id.
    std::string take_name(const std::string& what) {
        auto t = take();
        if (!t) return {};
        if (t->kind == Token::Kind::Punct) {
            fail(ParseCode::Syntax, "expected " + what + ", got '" + t->text + "'");
            return {};
        }
        if (t->kind == Token::Kind::Number && t->text.find_first_of("./") != std::string::npos) {
            fail(ParseCode::Syntax, "expected " + what + ", got number '" + t->text + "'");
            return {};
        }
        return t->text;
    }
    bool take_punct(const std::string& p) {
        auto t = take();
        if (!t) return false;
        if (t->kind != Token::Kind::Punct || t->text != p) {
            fail(ParseCode::Syntax, "expected '" + p + "', got '" + t->text + "'");
            return false;
        }
        return true;
    }
    bool take_keyword(const std::string& kw) {
        auto t = take();
        if (!t) return false;
        if (t->kind != Token::Kind::Ident || t->text != kw) {
            fail(ParseCode::Syntax, "expected '" + kw + "'");
            return false;
        }
        return true;
    }
    std::optional<CmpOp> take_op() {
        auto t = take();
        if (!t) return std::nullopt;
        if (t->text == "<") return CmpOp::Lt;
        if (t->text == "<=") return CmpOp::Le;
        if (t->text == "=") return CmpOp::Eq;
        if (t->text == ">=") return CmpOp::Ge;
        if (t->text == ">") return CmpOp::Gt;
        fail(ParseCode::Syntax, "expected comparison operator, got '" + t->text + "'");
        return std::nullopt;
    }
    void expect_end() {
        if (!failed && pos < toks.size())
            fail(ParseCode::Syntax, "trailing tokens on line");
    }
};

// Duration expression: rational literal or parameter name, resolved later.
struct RawDur {
    bool is_number = false;
    Rational number;
    std::string name;  // candidate parameter
    SourceSpan span;
};

std::optional<RawDur> take_durexpr(LineParser& p) {
    auto t = p.take();
    if (!t) return std::nullopt;
    RawDur d;
    d.span = t->span;
    if (t->kind == Token::Kind::Number) {
        auto r = parse_rational(t->text);
        if (!r) {
            p.fail(ParseCode::BadNumber, "malformed number '" + t->text + "'");
            return std::nullopt;
        }
        d.is_number = true;
        d.number = *r;
        return d;
    }
    if (t->kind == Token::Kind::Ident) {
        d.name = t->text;
        return d;
    }
    p.fail(ParseCode::Syntax, "expected duration, got '" + t->text + "'");
    return std::nullopt;
}

std::optional<VisitEvent> take_visit(LineParser& p) {
    auto kw = p.take();
    if (!kw) return std::nullopt;
    VisitKind kind;
    if (kw->text == "arrival")
        kind = VisitKind::Arrival;
    else if (kw->text == "departure")
        kind = VisitKind::Departure;
    else {
        p.fail(ParseCode::Syntax, "expected arrival(...) or departure(...)");
        return std::nullopt;
    }
    if (!p.take_punct("(")) return std::nullopt;
    std::string train = p.take_name("train name");
    if (!p.take_punct(",")) return std::nullopt;
    std::string node = p.take_name("node name");
    if (!p.take_punct(")")) return std::nullopt;
    if (p.failed) return std::nullopt;
    return VisitEvent{train, node, kind};
}

struct PendingDur {
    RawDur raw;
    DurationSpec* slot;
};

}  // namespace

ParseResult parse_system(const std::string& text) {
    ParseResult result;
    auto& sys = result.system;
    auto& errors = result.errors;

    std::vector<PendingDur> pending_durs;
    std::vector<std::pair<std::string, SourceSpan>> param_bound_refs;  // unused, bounds are numeric
    std::map<std::string, SourceSpan> train_decl_span;
    std::set<std::string> trains_with_connection;

    // Pass 1: line-by-line declarations.
    size_t offset = 0;
    int line_no = 0;
    std::istringstream in(text);
    std::string line;
    std::vector<std::tuple<std::vector<std::string>, SourceSpan>> connection_refs;  // per train order
    struct RawConstraint {
        ScheduleConstraint c;
        SourceSpan span;
        std::optional<RawDur> bound;
    };
    std::vector<RawConstraint> raw_constraints;

    while (std::getline(in, line)) {
        ++line_no;
        size_t line_offset = offset;
        offset += line.size() + 1;
        std::vector<ParseError> lex_errors;
        auto toks = lex_line(line, line_no, line_offset, lex_errors);
        errors.insert(errors.end(), lex_errors.begin(), lex_errors.end());
        if (toks.empty()) continue;

        LineParser p{toks, 0, errors, SourceSpan{line_no, 1, line_offset}};
        auto head = p.take();
        if (!head || head->kind != Token::Kind::Ident) {
            p.fail(ParseCode::Syntax, "expected directive keyword");
            continue;
        }
        const std::string& kw = head->text;

        if (kw == "param") {
            std::string name = p.take_name("parameter name");
            ParamDecl decl{name, std::nullopt};
            if (p.peek() != nullptr) {
                if (!p.take_keyword("in")) continue;
                if (!p.take_punct("[")) continue;
                auto lo = take_durexpr(p);
                if (!p.take_punct(",")) continue;
                auto hi = take_durexpr(p);
                if (!p.take_punct("]")) continue;
                if (!lo || !hi || !lo->is_number || !hi->is_number) {
                    p.fail(ParseCode::BadNumber, "parameter bounds must be rational literals");
                    continue;
                }
                decl.bounds = {{lo->number, hi->number}};
            }
            p.expect_end();
            if (p.failed) continue;
            if (sys.find_parameter(name) != nullptr) {
                errors.push_back({head->span, ParseCode::DuplicateId, "duplicate parameter " + name});
                continue;
            }
            sys.parameters.push_back(decl);
        } else if (kw == "node") {
            std::string id = p.take_name("node id");
            auto kind_tok = p.take();
            if (!kind_tok) continue;
            NodeKind kind;
            if (kind_tok->text == "boundary")
                kind = NodeKind::Boundary;
            else if (kind_tok->text == "station")
                kind = NodeKind::Station;
            else if (kind_tok->text == "normal")
                kind = NodeKind::Normal;
            else {
                p.fail(ParseCode::Syntax, "node kind must be boundary, station or normal");
                continue;
            }
            p.expect_end();
            if (p.failed) continue;
            if (sys.graph.find_node(id) != nullptr) {
                errors.push_back({head->span, ParseCode::DuplicateId, "duplicate node " + id});
                continue;
            }
            sys.graph.nodes.push_back({id, kind});
        } else if (kw == "segment") {
            std::string id = p.take_name("segment id");
            if (!p.take_punct("=")) continue;
            std::string a = p.take_name("node id");
            SourceSpan a_span = p.pos > 0 ? toks[p.pos - 1].span : p.here();
            if (!p.take_punct("--")) continue;
            std::string b = p.take_name("node id");
            if (!p.take_keyword("dur")) continue;
            auto dur = take_durexpr(p);
            p.expect_end();
            if (p.failed || !dur) continue;
            if (sys.graph.find_segment(id) != nullptr) {
                errors.push_back({head->span, ParseCode::DuplicateId, "duplicate segment " + id});
                continue;
            }
            if (a == b) {
                errors.push_back({a_span, ParseCode::SegSelfLoop,
                                  "segment " + id + " has identical endpoints"});
                continue;
            }
            sys.graph.segments.push_back({id, a, b});
            auto [it, _] = sys.graph.seg_dur.emplace(id, DurationSpec{});
            pending_durs.push_back({*dur, &it->second});
        } else if (kw == "pairdur") {
            std::string s1 = p.take_name("segment id");
            auto arrow = p.take();
            if (!arrow) continue;
            bool both = arrow->text == "<->";
            if (!both && arrow->text != "->") {
                p.fail(ParseCode::Syntax, "expected -> or <->");
                continue;
            }
            std::string s2 = p.take_name("segment id");
            if (!p.take_keyword("dur")) continue;
            auto dur = take_durexpr(p);
            p.expect_end();
            if (p.failed || !dur) continue;
            auto add = [&](const std::string& from, const std::string& to) {
                SegmentPair key{from, to};
                if (sys.graph.segs_dur.count(key)) {
                    errors.push_back({head->span, ParseCode::DuplicateId,
                                      "duplicate pair duration " + from + "->" + to});
                    return;
                }
                auto [it, _] = sys.graph.segs_dur.emplace(key, DurationSpec{});
                pending_durs.push_back({*dur, &it->second});
            };
            add(s1, s2);
            if (both) add(s2, s1);
        } else if (kw == "transition") {
            if (!p.take_keyword("at")) continue;
            std::string node = p.take_name("node id");
            if (!p.take_punct(":")) continue;
            auto take_set = [&]() -> std::optional<std::vector<std::string>> {
                if (!p.take_punct("{")) return std::nullopt;
                std::vector<std::string> ids;
                if (p.peek() && p.peek()->text == "}") {
                    p.take();
                    return ids;
                }
                while (true) {
                    ids.push_back(p.take_name("segment id"));
                    auto t = p.take();
                    if (!t) return std::nullopt;
                    if (t->text == "}") break;
                    if (t->text != ",") {
                        p.fail(ParseCode::Syntax, "expected ',' or '}'");
                        return std::nullopt;
                    }
                }
                return ids;
            };
            auto left = take_set();
            if (!p.take_punct("|")) continue;
            auto right = take_set();
            p.expect_end();
            if (p.failed || !left || !right) continue;
            std::sort(left->begin(), left->end());
            std::sort(right->begin(), right->end());
            sys.graph.transitions.push_back({*left, node, *right});
        } else if (kw == "train") {
            std::string id = p.take_name("train name");
            auto what = p.take();
            if (!what) continue;
            Train* train = nullptr;
            for (auto& t : sys.trains)
                if (t.id == id) train = &t;
            if (train == nullptr) {
                sys.trains.push_back(Train{id, {}, {}, {}});
                train = &sys.trains.back();
                train_decl_span[id] = head->span;
            }
            if (what->text == "connection") {
                if (!p.take_punct("[")) continue;
                std::vector<std::string> nodes;
                while (true) {
                    nodes.push_back(p.take_name("node id"));
                    auto t = p.take();
                    if (!t) break;
                    if (t->text == "]") break;
                    if (t->text != ",") {
                        p.fail(ParseCode::Syntax, "expected ',' or ']'");
                        break;
                    }
                }
                p.expect_end();
                if (p.failed) continue;
                if (trains_with_connection.count(id)) {
                    errors.push_back({head->span, ParseCode::DuplicateConnection,
                                      "train " + id + " already has a connection"});
                    continue;
                }
                trains_with_connection.insert(id);
                train->connection = nodes;
            } else if (what->text == "segdur") {
                std::string seg = p.take_name("segment id");
                if (!p.take_keyword("dur")) continue;
                auto dur = take_durexpr(p);
                p.expect_end();
                if (p.failed || !dur) continue;
                if (train->t_seg_dur.count(seg)) {
                    errors.push_back({head->span, ParseCode::DuplicateId,
                                      "duplicate train segdur for " + seg});
                    continue;
                }
                auto [it, _] = train->t_seg_dur.emplace(seg, DurationSpec{});
                pending_durs.push_back({*dur, &it->second});
            } else if (what->text == "pairdur") {
                std::string s1 = p.take_name("segment id");
                auto arrow = p.take();
                if (!arrow) continue;
                bool both = arrow->text == "<->";
                if (!both && arrow->text != "->") {
                    p.fail(ParseCode::Syntax, "expected -> or <->");
                    continue;
                }
                std::string s2 = p.take_name("segment id");
                if (!p.take_keyword("dur")) continue;
                auto dur = take_durexpr(p);
                p.expect_end();
                if (p.failed || !dur) continue;
                auto add = [&](const std::string& from, const std::string& to) {
                    SegmentPair key{from, to};
                    if (train->t_segs_dur.count(key)) {
                        errors.push_back({head->span, ParseCode::DuplicateId,
                                          "duplicate train pairdur " + from + "->" + to});
                        return;
                    }
                    auto [it, _] = train->t_segs_dur.emplace(key, DurationSpec{});
                    pending_durs.push_back({*dur, &it->second});
                };
                add(s1, s2);
                if (both) add(s2, s1);
            } else {
                p.fail(ParseCode::Syntax, "expected connection, segdur or pairdur");
            }
        } else if (kw == "constraint") {
            auto kind_tok = p.take();
            if (!kind_tok) continue;
            RawConstraint rc;
            rc.span = head->span;
            if (kind_tok->text == "order") {
                auto v1 = take_visit(p);
                auto op = p.take_op();
                auto v2 = take_visit(p);
                p.expect_end();
                if (p.failed || !v1 || !op || !v2) continue;
                rc.c = ScheduleConstraint::ordering(*v1, *op, *v2);
            } else if (kind_tok->text == "abs") {
                auto v = take_visit(p);
                auto op = p.take_op();
                auto d = take_durexpr(p);
                p.expect_end();
                if (p.failed || !v || !op || !d) continue;
                rc.c = ScheduleConstraint::absolute(*v, *op, DurationSpec{});
                rc.bound = d;
            } else if (kind_tok->text == "rel") {
                auto fn = p.take();
                if (!fn) continue;
                std::optional<VisitEvent> v1, v2;
                if (fn->text == "transfer") {
                    if (!p.take_punct("(")) continue;
                    v1 = take_visit(p);
                    if (!p.take_punct(",")) continue;
                    v2 = take_visit(p);
                    if (!p.take_punct(")")) continue;
                } else if (fn->text == "wait") {
                    if (!p.take_punct("(")) continue;
                    std::string train = p.take_name("train name");
                    if (!p.take_punct(",")) continue;
                    std::string node = p.take_name("node id");
                    if (!p.take_punct(")")) continue;
                    v1 = VisitEvent{train, node, VisitKind::Arrival};
                    v2 = VisitEvent{train, node, VisitKind::Departure};
                } else {
                    p.fail(ParseCode::Syntax, "expected transfer(...) or wait(...)");
                    continue;
                }
                auto op = p.take_op();
                auto d = take_durexpr(p);
                p.expect_end();
                if (p.failed || !v1 || !v2 || !op || !d) continue;
                rc.c = ScheduleConstraint::relative(*v1, *v2, *op, DurationSpec{});
                rc.bound = d;
            } else {
                p.fail(ParseCode::Syntax, "constraint kind must be order, abs or rel");
                continue;
            }
            raw_constraints.push_back(std::move(rc));
        } else {
            p.fail(ParseCode::Syntax, "unknown directive '" + kw + "'");
        }
    }

    // Pass 2: resolve duration expressions against the parameter table.
    for (auto& pd : pending_durs) {
        if (pd.raw.is_number) {
            *pd.slot = DurationSpec::constant(pd.raw.number);
        } else if (sys.find_parameter(pd.raw.name) != nullptr) {
            *pd.slot = DurationSpec::parameter(pd.raw.name);
        } else {
            errors.push_back({pd.raw.span, ParseCode::UnknownParam,
                              "undeclared parameter '" + pd.raw.name + "'"});
        }
    }
    for (auto& rc : raw_constraints) {
        if (rc.bound) {
            if (rc.bound->is_number) {
                rc.c.bound = DurationSpec::constant(rc.bound->number);
            } else if (sys.find_parameter(rc.bound->name) != nullptr) {
                rc.c.bound = DurationSpec::parameter(rc.bound->name);
            } else {
                errors.push_back({rc.bound->span, ParseCode::UnknownParam,
                                  "undeclared parameter '" + rc.bound->name + "'"});
                continue;
            }
        }
        sys.constraints.push_back(rc.c);
    }
    // Reference resolution: ids used must exist somewhere in the file.
    auto known_node = [&](const std::string& id) { return sys.graph.find_node(id) != nullptr; };
    auto known_seg = [&](const std::string& id) { return sys.graph.find_segment(id) != nullptr; };
    for (const auto& s : sys.graph.segments) {
        for (const auto& e : {s.end_a, s.end_b})
            if (!known_node(e))
                errors.push_back({{}, ParseCode::UnknownRef,
                                  "segment " + s.id + " references unknown node " + e});
    }
    for (const auto& [key, _] : sys.graph.segs_dur) {
        if (!known_seg(key.first) || !known_seg(key.second))
            errors.push_back({{}, ParseCode::UnknownRef,
                              "pairdur references unknown segment " + key.first + " or " + key.second});
    }
    for (const auto& t : sys.graph.transitions) {
        if (!known_node(t.node))
            errors.push_back({{}, ParseCode::UnknownRef, "transition at unknown node " + t.node});
        for (const auto& side : {t.left, t.right})
            for (const auto& sid : side)
                if (!known_seg(sid))
                    errors.push_back({{}, ParseCode::UnknownRef,
                                      "transition references unknown segment " + sid});
    }
    for (const auto& t : sys.trains) {
        if (!trains_with_connection.count(t.id)) {
            auto span = train_decl_span.count(t.id) ? train_decl_span[t.id] : SourceSpan{};
            errors.push_back({span, ParseCode::MissingConnection,
                              "train " + t.id + " has no connection line"});
        }
        for (const auto& n : t.connection)
            if (!known_node(n))
                errors.push_back({train_decl_span.count(t.id) ? train_decl_span[t.id] : SourceSpan{},
                                  ParseCode::UnknownRef,
                                  "connection of " + t.id + " references unknown node " + n});
        for (const auto& [seg, _] : t.t_seg_dur)
            if (!known_seg(seg))
                errors.push_back({{}, ParseCode::UnknownRef,
                                  "train " + t.id + " segdur references unknown segment " + seg});
        for (const auto& [key, _] : t.t_segs_dur)
            if (!known_seg(key.first) || !known_seg(key.second))
                errors.push_back({{}, ParseCode::UnknownRef,
                                  "train " + t.id + " pairdur references unknown segment"});
    }
    for (const auto& c : sys.constraints) {
        auto check_event = [&](const VisitEvent& v) {
            if (sys.find_train(v.train) == nullptr)
                errors.push_back({{}, ParseCode::UnknownRef,
                                  "constraint references unknown train " + v.train});
            if (!known_node(v.node))
                errors.push_back({{}, ParseCode::UnknownRef,
                                  "constraint references unknown node " + v.node});
        };
        check_event(c.v1);
        if (c.kind != ScheduleConstraint::Kind::Absolute) check_event(c.v2);
    }

    return result;
}

}  // namespace rail

#include "crnldp/parse.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <map>
#include <sstream>
#include <vector>

namespace crnldp {

namespace {

struct Cursor {
    const std::string& text;
    std::size_t pos = 0;  // within the current line
    int line_no = 1;

    explicit Cursor(const std::string& t) : text(t) {}
};

struct LineLexer {
    std::string line;
    std::size_t pos = 0;
    int line_no;

    LineLexer(std::string l, int n) : line(std::move(l)), line_no(n) {}

    void skip_ws() {
        while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
    }

    bool at_end() {
        skip_ws();
        return pos >= line.size();
    }

    int col() const { return static_cast<int>(pos) + 1; }

    char peek() {
        skip_ws();
        return pos < line.size() ? line[pos] : '\0';
    }

    bool consume(const std::string& tok) {
        skip_ws();
        if (line.compare(pos, tok.size(), tok) == 0) {
            pos += tok.size();
            return true;
        }
        return false;
    }

    std::optional<std::string> ident() {
        skip_ws();
        std::size_t start = pos;
        if (pos < line.size() && (std::isalpha(static_cast<unsigned char>(line[pos])) ||
                                  line[pos] == '_')) {
            ++pos;
            while (pos < line.size() && (std::isalnum(static_cast<unsigned char>(line[pos])) ||
                                         line[pos] == '_'))
                ++pos;
            return line.substr(start, pos - start);
        }
        return std::nullopt;
    }

    std::optional<std::int64_t> integer() {
        skip_ws();
        std::size_t start = pos;
        while (pos < line.size() && std::isdigit(static_cast<unsigned char>(line[pos]))) ++pos;
        if (pos == start) return std::nullopt;
        std::int64_t v = 0;
        auto [p, ec] = std::from_chars(line.data() + start, line.data() + pos, v);
        (void)p;
        if (ec != std::errc()) return std::nullopt;
        return v;
    }

    std::optional<double> rate() {
        skip_ws();
        std::size_t start = pos;
        const char* begin = line.c_str() + start;
        char* end = nullptr;
        double v = std::strtod(begin, &end);
        if (end == begin) return std::nullopt;
        pos = start + static_cast<std::size_t>(end - begin);
        return v;
    }
};

struct Builder {
    std::vector<std::string> species;
    std::map<std::string, std::size_t> index;
    bool declared = false;  // a `species` statement fixes the roster
    std::vector<Reaction> reactions;
    std::optional<ParseError> error;

    void fail(int line, int col, ParseErrorKind kind, std::string msg) {
        if (!error) error = ParseError{line, col, std::move(msg), kind};
    }

    std::optional<std::size_t> species_id(const std::string& name, int line, int col) {
        auto it = index.find(name);
        if (it != index.end()) return it->second;
        if (declared) {
            fail(line, col, ParseErrorKind::UnknownSpecies,
                 "species '" + name + "' not in the species declaration");
            return std::nullopt;
        }
        std::size_t id = species.size();
        species.push_back(name);
        index.emplace(name, id);
        return id;
    }
};

std::optional<Complex> parse_complex(LineLexer& lex, Builder& b) {
    Complex c;
    lex.skip_ws();
    // "0" is the empty complex, but "0" may also start a coefficient like "0 A"
    // which the grammar forbids via positivity below.
    if (lex.peek() == '0') {
        std::size_t save = lex.pos;
        lex.consume("0");
        lex.skip_ws();
        if (lex.ident()) {
            b.fail(lex.line_no, static_cast<int>(save) + 1, ParseErrorKind::Syntax,
                   "zero stoichiometric coefficient");
            return std::nullopt;
        }
        lex.pos = save;
        lex.consume("0");
        return c;
    }
    while (true) {
        int col = lex.col();
        std::int64_t coeff = 1;
        if (auto n = lex.integer()) {
            coeff = *n;
            if (coeff <= 0) {
                b.fail(lex.line_no, col, ParseErrorKind::Syntax,
                       "stoichiometric coefficient must be positive");
                return std::nullopt;
            }
        }
        col = lex.col();
        auto name = lex.ident();
        if (!name) {
            b.fail(lex.line_no, col, ParseErrorKind::Syntax, "expected species name");
            return std::nullopt;
        }
        auto id = b.species_id(*name, lex.line_no, col);
        if (!id) return std::nullopt;
        c.set_coeff(*id, c.coeff(*id) + coeff);
        if (!lex.consume("+")) break;
    }
    return c;
}

void parse_reaction_line(LineLexer& lex, Builder& b) {
    int start_col = lex.col();
    auto lhs = parse_complex(lex, b);
    if (!lhs) return;

    bool reversible = false;
    int arrow_col = lex.col();
    if (lex.consume("<->")) {
        reversible = true;
    } else if (!lex.consume("->")) {
        b.fail(lex.line_no, arrow_col, ParseErrorKind::Syntax, "expected '->' or '<->'");
        return;
    }

    auto rhs = parse_complex(lex, b);
    if (!rhs) return;

    int at_col = lex.col();
    if (!lex.consume("@")) {
        b.fail(lex.line_no, at_col, ParseErrorKind::Syntax, "expected '@' before rate");
        return;
    }
    int rate_col = lex.col();
    auto k_fwd = lex.rate();
    if (!k_fwd) {
        b.fail(lex.line_no, rate_col, ParseErrorKind::Syntax, "expected rate constant");
        return;
    }
    if (*k_fwd <= 0.0) {
        b.fail(lex.line_no, rate_col, ParseErrorKind::NonPositiveRate,
               "rate constant must be positive");
        return;
    }

    std::optional<double> k_bwd;
    if (lex.consume(",")) {
        int col = lex.col();
        k_bwd = lex.rate();
        if (!k_bwd) {
            b.fail(lex.line_no, col, ParseErrorKind::Syntax, "expected backward rate constant");
            return;
        }
        if (*k_bwd <= 0.0) {
            b.fail(lex.line_no, col, ParseErrorKind::NonPositiveRate,
                   "rate constant must be positive");
            return;
        }
    }
    if (reversible && !k_bwd) k_bwd = *k_fwd;
    if (!reversible && k_bwd) {
        b.fail(lex.line_no, lex.col(), ParseErrorKind::Syntax,
               "second rate is only valid with '<->'");
        return;
    }

    if (!lex.at_end()) {
        b.fail(lex.line_no, lex.col(), ParseErrorKind::Syntax, "trailing input after reaction");
        return;
    }

    if (*lhs == *rhs) {
        b.fail(lex.line_no, start_col, ParseErrorKind::NoOpReaction,
               "reaction input equals output");
        return;
    }

    b.reactions.push_back({*lhs, *rhs, *k_fwd});
    if (reversible) b.reactions.push_back({*rhs, *lhs, *k_bwd});
}

void parse_species_decl(LineLexer& lex, Builder& b) {
    if (b.declared || !b.species.empty()) {
        b.fail(lex.line_no, lex.col(), ParseErrorKind::Syntax,
               "species declaration must come before any species mention");
        return;
    }
    b.declared = true;
    while (true) {
        int col = lex.col();
        auto name = lex.ident();
        if (!name) {
            b.fail(lex.line_no, col, ParseErrorKind::Syntax, "expected species name");
            return;
        }
        if (b.index.count(*name)) {
            b.fail(lex.line_no, col, ParseErrorKind::Syntax, "duplicate species '" + *name + "'");
            return;
        }
        b.index.emplace(*name, b.species.size());
        b.species.push_back(*name);
        if (!lex.consume(",")) break;
    }
    if (!lex.at_end())
        b.fail(lex.line_no, lex.col(), ParseErrorKind::Syntax,
               "trailing input after species declaration");
}

}  // namespace

ParseResult parse_network(const std::string& source) {
    Builder b;
    std::istringstream in(source);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();  // CRLF input
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        LineLexer lex(raw, line_no);
        if (lex.at_end()) continue;

        std::size_t save = lex.pos;
        if (auto word = lex.ident(); word && *word == "species" && lex.peek() != '-' &&
                                     lex.peek() != '<' && lex.peek() != '+' &&
                                     lex.peek() != '@') {
            parse_species_decl(lex, b);
        } else {
            lex.pos = save;
            parse_reaction_line(lex, b);
        }
        if (b.error) return {std::nullopt, b.error};
    }

    if (b.reactions.empty()) {
        ParseError e{std::max(1, line_no), 1, "network has no reactions",
                     ParseErrorKind::EmptyNetwork};
        return {std::nullopt, e};
    }
    try {
        return {Network(std::move(b.species), std::move(b.reactions)), std::nullopt};
    } catch (const std::invalid_argument& ex) {
        ParseError e{1, 1, ex.what(), ParseErrorKind::Syntax};
        return {std::nullopt, e};
    }
}

namespace {

std::string format_rate(double k) {
    char buf[40];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), k);  // shortest round-trip
    (void)ec;
    return std::string(buf, end);
}

std::string format_complex(const Network& net, const Complex& c) {
    if (c.is_empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [idx, coeff] : c.coeffs()) {
        if (!first) out += " + ";
        first = false;
        if (coeff != 1) out += std::to_string(coeff) + " ";
        out += net.species_name(idx);
    }
    return out;
}

}  // namespace

std::string serialize_network(const Network& net) {
    std::string out = "species ";
    for (std::size_t i = 0; i < net.num_species(); ++i) {
        if (i) out += ", ";
        out += net.species_name(i);
    }
    out += "\n";
    for (const auto& r : net.reactions()) {
        out += format_complex(net, r.input);
        out += " -> ";
        out += format_complex(net, r.output);
        out += " @ ";
        out += format_rate(r.rate_constant);
        out += "\n";
    }
    return out;
}

std::string to_string(ParseErrorKind kind) {
    switch (kind) {
        case ParseErrorKind::Syntax: return "Syntax";
        case ParseErrorKind::UnknownSpecies: return "UnknownSpecies";
        case ParseErrorKind::NonPositiveRate: return "NonPositiveRate";
        case ParseErrorKind::EmptyNetwork: return "EmptyNetwork";
        case ParseErrorKind::NoOpReaction: return "NoOpReaction";
    }
    return "Syntax";
}

}  // namespace crnldp

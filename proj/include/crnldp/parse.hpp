#pragma once

#include <optional>
#include <string>

#include "crnldp/network.hpp"

namespace crnldp {

enum class ParseErrorKind { Syntax, UnknownSpecies, NonPositiveRate, EmptyNetwork, NoOpReaction };

struct ParseError {
    int line = 0;    // 1-based
    int column = 0;  // 1-based
    std::string message;
    ParseErrorKind kind = ParseErrorKind::Syntax;
};

struct ParseResult {
    std::optional<Network> network;
    std::optional<ParseError> error;

    bool ok() const { return network.has_value(); }
};

/// Parse the plain-text `.crn` format. Species order is first-mention order
/// unless a `species` declaration fixes it; `<->` lines expand to two
/// reactions. The first error wins.
ParseResult parse_network(const std::string& source);

/// Canonical form: species declaration, then one reaction per line in stored
/// order. parse(serialize(net)) is structurally equal to net.
std::string serialize_network(const Network& net);

std::string to_string(ParseErrorKind kind);

}  // namespace crnldp

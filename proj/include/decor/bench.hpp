#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "decor/netlist.hpp"

namespace decor {

/// Parses BENCH text: `INPUT(x)`, `OUTPUT(x)`, `x = KIND(a, b, ...)`, `#`
/// comments, LF or CRLF. Inputs named `keyinput*` become key ports.
/// Throws ParseError (syntax; line and column set) or ParseError with the
/// offending line for cycles, undefined nets and duplicate definitions.
Circuit parse_bench(std::string_view text, std::string name = "circuit");

/// Emits LF-terminated BENCH. Constant pseudo-gates are replaced by
/// XOR(s, s) / XNOR(s, s) over the first source port.
std::string write_bench(const Circuit& c);

Circuit read_bench_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace decor

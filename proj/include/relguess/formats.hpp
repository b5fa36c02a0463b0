#pragma once

#include <optional>
#include <string>
#include <vector>

#include "relguess/monomial.hpp"
#include "relguess/structures.hpp"

namespace relguess {

std::string read_text_file(const std::string& path);

// "lex" or "drl"; variables ranked in the order they are listed
MonomialOrder parse_order(const std::string& kind, std::size_t nvars);
std::vector<std::string> split_names(const std::string& csv);

// one generator per line, integers separated by spaces or commas
Cone parse_cone_text(const std::string& text);
// basis rows, then optionally a line "domain" followed by representatives
Lattice parse_lattice_text(const std::string& text);
// "factors q1 q2 ..." then one degree tuple per variable
GDegreeMap parse_gdeg_text(const std::string& text, std::size_t nvars);

std::string cone_to_text(const Cone& c);
std::string lattice_to_text(const Lattice& l);
std::string gdeg_to_text(const GDegreeMap& g);

// lines with comments ('#') stripped and blanks dropped
std::vector<std::string> content_lines(const std::string& text);

}  // namespace relguess

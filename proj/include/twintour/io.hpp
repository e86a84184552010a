#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "twintour/graph.hpp"

namespace twintour {

struct ContractionSequence;       // widths.hpp
struct DirectedPathDecomposition; // widths.hpp
struct DirectedTreeDecomposition; // widths.hpp

class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

// Text formats:
//   tournament <n>      followed by n rows of n chars over {0,1}; row i char j
//                       is 1 iff edge i->j; diagonal 0; matrix+transpose must
//                       be all-ones off the diagonal.
//   digraph <n> <m>     followed by m lines "u v".
//   struct <n>          followed by sections "rel <name> <m>" and "red <m>",
//                       each with m lines "u v".
//   contractions <n>    followed by n-1 lines "a b" (part ids; the merged part
//                       keeps min(a,b) as its id).
//   dpd <p>             followed by p lines of space-separated vertex ids
//                       (a line may be empty).
//   dtd <t> <root>      followed by t-1 lines "s u" (tree edges away from the
//                       root), t lines "bag <node> [ids...]", and t-1 lines
//                       "guard <s> <u> [ids...]".
//   order <n>           followed by one line listing the vertices in order.

Tournament parse_tournament(std::istream& in);
std::string format_tournament(const Tournament& t);

Digraph parse_digraph(std::istream& in);
std::string format_digraph(const Digraph& g);

RelStructure parse_struct(std::istream& in);
std::string format_struct(const RelStructure& a);

// Dispatch on the header keyword: accepts tournament/digraph/struct files and
// returns everything as a RelStructure (tournament/digraph become relation E).
RelStructure parse_structure_any(std::istream& in, std::string* kind = nullptr);

ContractionSequence parse_contractions(std::istream& in);
std::string format_contractions(const ContractionSequence& seq);

DirectedPathDecomposition parse_dpd(std::istream& in);
std::string format_dpd(const DirectedPathDecomposition& dpd);

DirectedTreeDecomposition parse_dtd(std::istream& in);
std::string format_dtd(const DirectedTreeDecomposition& dtd);

std::vector<int> parse_order(std::istream& in);
std::string format_order(const std::vector<int>& order);

// Permutations as one-line image arrays; groups as `perms <n> <count>`, one
// generator line each, and a trailing `# order <N>` comment for audit.
struct PermGroupFile {
    int n = 0;
    std::vector<std::vector<int>> generators;
    std::string order;  // as written in the audit comment
};

PermGroupFile parse_perm_group(std::istream& in);
std::string format_perm_group(int n, const std::vector<std::vector<int>>& generators,
                              const std::string& order);

// Convenience file wrappers.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);
uint64_t fnv1a_digest(const std::string& data);

}  // namespace twintour

#include "twintour/io.hpp"

#include <fstream>
#include <sstream>

#include "twintour/widths.hpp"

namespace twintour {

namespace {

// Line-oriented reader tracking line numbers for diagnostics.
class LineReader {
public:
    explicit LineReader(std::istream& in) : in_(in) {}

    // Next non-empty line unless allow_empty; returns false at EOF.
    bool next(std::string& out, bool allow_empty = false) {
        std::string line;
        while (std::getline(in_, line)) {
            ++line_no_;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty() && !allow_empty) continue;
            if (!line.empty() && line[0] == '#') continue;
            out = line;
            return true;
        }
        return false;
    }

    std::string require(const std::string& what, bool allow_empty = false) {
        std::string line;
        if (!next(line, allow_empty)) throw ParseError(line_no_, "expected " + what + ", got end of input");
        return line;
    }

    int line_no() const { return line_no_; }

private:
    std::istream& in_;
    int line_no_ = 0;
};

std::vector<long long> split_ints(const std::string& s, int line_no) {
    std::vector<long long> out;
    std::istringstream iss(s);
    std::string tok;
    while (iss >> tok) {
        try {
            size_t pos = 0;
            long long v = std::stoll(tok, &pos);
            if (pos != tok.size()) throw std::invalid_argument(tok);
            out.push_back(v);
        } catch (const std::exception&) {
            throw ParseError(line_no, "not an integer: '" + tok + "'");
        }
    }
    return out;
}

struct Header {
    std::string keyword;
    std::vector<long long> args;
};

Header parse_header(LineReader& reader, const std::string& expected) {
    std::string line = reader.require("header '" + expected + " ...'");
    std::istringstream iss(line);
    Header h;
    iss >> h.keyword;
    std::string rest;
    std::getline(iss, rest);
    h.args = split_ints(rest, reader.line_no());
    if (!expected.empty() && h.keyword != expected)
        throw ParseError(reader.line_no(),
                         "expected header '" + expected + "', got '" + h.keyword + "'");
    return h;
}

bool is_bijection_line(const std::vector<int>& img, int n) {
    if (static_cast<int>(img.size()) != n) return false;
    std::vector<uint8_t> seen(n, 0);
    for (int y : img) {
        if (y < 0 || y >= n || seen[y]) return false;
        seen[y] = 1;
    }
    return true;
}

std::pair<int, int> parse_edge_line(LineReader& reader, int n) {
    std::string line = reader.require("edge line 'u v'");
    auto vals = split_ints(line, reader.line_no());
    if (vals.size() != 2) throw ParseError(reader.line_no(), "expected exactly two integers");
    if (vals[0] < 0 || vals[0] >= n || vals[1] < 0 || vals[1] >= n)
        throw ParseError(reader.line_no(), "vertex id out of range");
    return {static_cast<int>(vals[0]), static_cast<int>(vals[1])};
}

}  // namespace

Tournament parse_tournament(std::istream& in) {
    LineReader reader(in);
    Header h = parse_header(reader, "tournament");
    if (h.args.size() != 1 || h.args[0] < 1)
        throw ParseError(reader.line_no(), "expected 'tournament <n>' with n >= 1");
    int n = static_cast<int>(h.args[0]);
    Digraph g(n);
    for (int i = 0; i < n; ++i) {
        std::string row = reader.require("matrix row", n == 0);
        if (static_cast<int>(row.size()) != n)
            throw ParseError(reader.line_no(), "row has " + std::to_string(row.size()) +
                                                   " chars, expected " + std::to_string(n));
        for (int j = 0; j < n; ++j) {
            char c = row[j];
            if (c != '0' && c != '1')
                throw ParseError(reader.line_no(), std::string("bad matrix char '") + c + "'");
            if (c == '1') {
                if (i == j) throw ParseError(reader.line_no(), "diagonal must be 0");
                g.add_edge(i, j);
            }
        }
    }
    try {
        return Tournament(std::move(g));
    } catch (const std::invalid_argument& e) {
        throw ParseError(reader.line_no(), e.what());
    }
}

std::string format_tournament(const Tournament& t) {
    int n = t.n();
    std::string out = "tournament " + std::to_string(n) + "\n";
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) out += t.has_edge(i, j) ? '1' : '0';
        out += '\n';
    }
    return out;
}

Digraph parse_digraph(std::istream& in) {
    LineReader reader(in);
    Header h = parse_header(reader, "digraph");
    if (h.args.size() != 2 || h.args[0] < 1 || h.args[1] < 0)
        throw ParseError(reader.line_no(), "expected 'digraph <n> <m>'");
    int n = static_cast<int>(h.args[0]);
    Digraph g(n);
    for (long long e = 0; e < h.args[1]; ++e) {
        auto [u, v] = parse_edge_line(reader, n);
        try {
            g.add_edge(u, v);
        } catch (const std::invalid_argument& ex) {
            throw ParseError(reader.line_no(), ex.what());
        }
    }
    return g;
}

std::string format_digraph(const Digraph& g) {
    std::string out = "digraph " + std::to_string(g.n()) + " " + std::to_string(g.edge_count()) + "\n";
    for (auto [u, v] : g.edges()) out += std::to_string(u) + " " + std::to_string(v) + "\n";
    return out;
}

RelStructure parse_struct(std::istream& in) {
    LineReader reader(in);
    Header h = parse_header(reader, "struct");
    if (h.args.size() != 1 || h.args[0] < 1)
        throw ParseError(reader.line_no(), "expected 'struct <n>'");
    int n = static_cast<int>(h.args[0]);
    RelStructure a(n);
    std::string line;
    while (reader.next(line)) {
        std::istringstream iss(line);
        std::string kind;
        iss >> kind;
        if (kind == "rel") {
            std::string name;
            long long m;
            if (!(iss >> name >> m) || m < 0)
                throw ParseError(reader.line_no(), "expected 'rel <name> <m>'");
            std::vector<std::pair<int, int>> pairs;
            for (long long e = 0; e < m; ++e) pairs.push_back(parse_edge_line(reader, n));
            a.add_relation(name, pairs);
        } else if (kind == "red") {
            long long m;
            if (!(iss >> m) || m < 0) throw ParseError(reader.line_no(), "expected 'red <m>'");
            for (long long e = 0; e < m; ++e) {
                auto [u, v] = parse_edge_line(reader, n);
                try {
                    a.add_red_edge(u, v);
                } catch (const std::invalid_argument& ex) {
                    throw ParseError(reader.line_no(), ex.what());
                }
            }
        } else {
            throw ParseError(reader.line_no(), "unknown section '" + kind + "'");
        }
    }
    return a;
}

std::string format_struct(const RelStructure& a) {
    std::string out = "struct " + std::to_string(a.n()) + "\n";
    for (int r = 0; r < a.relation_count(); ++r) {
        auto edges = a.relation_edges(r);
        out += "rel " + a.relation_name(r) + " " + std::to_string(edges.size()) + "\n";
        for (auto [u, v] : edges) out += std::to_string(u) + " " + std::to_string(v) + "\n";
    }
    auto reds = a.red_edges();
    if (!reds.empty()) {
        out += "red " + std::to_string(reds.size()) + "\n";
        for (auto [u, v] : reds) out += std::to_string(u) + " " + std::to_string(v) + "\n";
    }
    return out;
}

RelStructure parse_structure_any(std::istream& in, std::string* kind) {
    // Peek the keyword, then re-parse from a buffered copy.
    std::stringstream buffer;
    buffer << in.rdbuf();
    std::string content = buffer.str();
    std::istringstream peek(content);
    std::string word;
    peek >> word;
    if (kind) *kind = word;
    std::istringstream again(content);
    if (word == "tournament") return RelStructure::from_tournament(parse_tournament(again));
    if (word == "digraph") return RelStructure::from_digraph(parse_digraph(again));
    if (word == "struct") return parse_struct(again);
    throw ParseError(1, "unknown file kind '" + word + "'");
}

ContractionSequence parse_contractions(std::istream& in) {
    LineReader reader(in);
    Header h = parse_header(reader, "contractions");
    if (h.args.size() != 1 || h.args[0] < 1)
        throw ParseError(reader.line_no(), "expected 'contractions <n>'");
    ContractionSequence seq;
    seq.n = static_cast<int>(h.args[0]);
    for (int i = 0; i + 1 < seq.n; ++i) seq.merges.push_back(parse_edge_line(reader, seq.n));
    return seq;
}

std::string format_contractions(const ContractionSequence& seq) {
    std::string out = "contractions " + std::to_string(seq.n) + "\n";
    for (auto [a, b] : seq.merges) out += std::to_string(a) + " " + std::to_string(b) + "\n";
    return out;
}

DirectedPathDecomposition parse_dpd(std::istream& in) {
    LineReader reader(in);
    Header h = parse_header(reader, "dpd");
    if (h.args.size() != 1 || h.args[0] < 1)
        throw ParseError(reader.line_no(), "expected 'dpd <p>'");
    DirectedPathDecomposition dpd;
    int p = static_cast<int>(h.args[0]);
    int max_vertex = -1;
    for (int i = 0; i < p; ++i) {
        std::string line = reader.require("bag line", /*allow_empty=*/true);
        auto vals = split_ints(line, reader.line_no());
        std::vector<int> bag;
        for (long long v : vals) {
            if (v < 0) throw ParseError(reader.line_no(), "vertex id out of range");
            bag.push_back(static_cast<int>(v));
            max_vertex = std::max(max_vertex, static_cast<int>(v));
        }
        dpd.bags.push_back(std::move(bag));
    }
    dpd.n = max_vertex + 1;
    return dpd;
}

std::string format_dpd(const DirectedPathDecomposition& dpd) {
    std::string out = "dpd " + std::to_string(dpd.bags.size()) + "\n";
    for (const auto& bag : dpd.bags) {
        for (size_t i = 0; i < bag.size(); ++i) {
            if (i) out += ' ';
            out += std::to_string(bag[i]);
        }
        out += '\n';
    }
    return out;
}

DirectedTreeDecomposition parse_dtd(std::istream& in) {
    LineReader reader(in);
    Header h = parse_header(reader, "dtd");
    if (h.args.size() != 2 || h.args[0] < 1 || h.args[1] < 0 || h.args[1] >= h.args[0])
        throw ParseError(reader.line_no(), "expected 'dtd <t> <root>'");
    DirectedTreeDecomposition dtd;
    int t = static_cast<int>(h.args[0]);
    dtd.root = static_cast<int>(h.args[1]);
    dtd.parent.assign(t, -1);
    dtd.bags.assign(t, {});
    dtd.guards.assign(t, {});
    for (int e = 0; e + 1 < t; ++e) {
        auto [s, u] = parse_edge_line(reader, t);
        if (dtd.parent[u] != -1 || u == dtd.root)
            throw ParseError(reader.line_no(), "node has two parents or root has a parent");
        dtd.parent[u] = s;
    }
    int max_vertex = -1;
    auto parse_id_section = [&](const std::string& tag, int expected_count,
                               std::vector<std::vector<int>>& out, bool edge_keyed) {
        for (int i = 0; i < expected_count; ++i) {
            std::string line = reader.require(tag + " line");
            std::istringstream iss(line);
            std::string word;
            iss >> word;
            if (word != tag) throw ParseError(reader.line_no(), "expected '" + tag + "' line");
            int key, key2 = -1;
            if (!(iss >> key)) throw ParseError(reader.line_no(), "expected node id");
            if (edge_keyed && !(iss >> key2)) throw ParseError(reader.line_no(), "expected child id");
            int node = edge_keyed ? key2 : key;
            if (node < 0 || node >= t) throw ParseError(reader.line_no(), "node id out of range");
            if (edge_keyed && dtd.parent[node] != key)
                throw ParseError(reader.line_no(), "guard edge does not match tree");
            std::string rest;
            std::getline(iss, rest);
            for (long long v : split_ints(rest, reader.line_no())) {
                if (v < 0) throw ParseError(reader.line_no(), "vertex id out of range");
                out[node].push_back(static_cast<int>(v));
                max_vertex = std::max(max_vertex, static_cast<int>(v));
            }
        }
    };
    parse_id_section("bag", t, dtd.bags, false);
    parse_id_section("guard", t - 1, dtd.guards, true);
    dtd.n = max_vertex + 1;
    return dtd;
}

std::string format_dtd(const DirectedTreeDecomposition& dtd) {
    int t = dtd.node_count();
    std::string out = "dtd " + std::to_string(t) + " " + std::to_string(dtd.root) + "\n";
    for (int v = 0; v < t; ++v)
        if (v != dtd.root) out += std::to_string(dtd.parent[v]) + " " + std::to_string(v) + "\n";
    auto emit_ids = [&out](const std::vector<int>& ids) {
        for (int v : ids) out += " " + std::to_string(v);
        out += '\n';
    };
    for (int v = 0; v < t; ++v) {
        out += "bag " + std::to_string(v);
        emit_ids(dtd.bags[v]);
    }
    for (int v = 0; v < t; ++v) {
        if (v == dtd.root) continue;
        out += "guard " + std::to_string(dtd.parent[v]) + " " + std::to_string(v);
        emit_ids(dtd.guards[v]);
    }
    return out;
}

std::vector<int> parse_order(std::istream& in) {
    LineReader reader(in);
    Header h = parse_header(reader, "order");
    if (h.args.size() != 1 || h.args[0] < 1)
        throw ParseError(reader.line_no(), "expected 'order <n>'");
    int n = static_cast<int>(h.args[0]);
    std::string line = reader.require("order line");
    auto vals = split_ints(line, reader.line_no());
    if (static_cast<int>(vals.size()) != n)
        throw ParseError(reader.line_no(), "expected " + std::to_string(n) + " vertex ids");
    std::vector<int> seq;
    std::vector<uint8_t> seen(n, 0);
    for (long long v : vals) {
        if (v < 0 || v >= n || seen[v])
            throw ParseError(reader.line_no(), "order is not a permutation of 0.." + std::to_string(n - 1));
        seen[v] = 1;
        seq.push_back(static_cast<int>(v));
    }
    return seq;
}

std::string format_order(const std::vector<int>& order) {
    std::string out = "order " + std::to_string(order.size()) + "\n";
    for (size_t i = 0; i < order.size(); ++i) {
        if (i) out += ' ';
        out += std::to_string(order[i]);
    }
    out += '\n';
    return out;
}

PermGroupFile parse_perm_group(std::istream& in) {
    // Note the audit comment before the generic reader skips it.
    std::stringstream buffer;
    buffer << in.rdbuf();
    std::string content = buffer.str();
    PermGroupFile out;
    {
        std::istringstream scan(content);
        std::string line;
        while (std::getline(scan, line))
            if (line.rfind("# order ", 0) == 0) out.order = line.substr(8);
    }
    std::istringstream body(content);
    LineReader reader(body);
    Header h = parse_header(reader, "perms");
    if (h.args.size() != 2 || h.args[0] < 1 || h.args[1] < 0)
        throw ParseError(reader.line_no(), "expected 'perms <n> <count>'");
    out.n = static_cast<int>(h.args[0]);
    for (long long i = 0; i < h.args[1]; ++i) {
        std::string line = reader.require("permutation line");
        auto vals = split_ints(line, reader.line_no());
        std::vector<int> img(vals.begin(), vals.end());
        if (!is_bijection_line(img, out.n))
            throw ParseError(reader.line_no(), "line is not a permutation of the domain");
        out.generators.push_back(std::move(img));
    }
    return out;
}

std::string format_perm_group(int n, const std::vector<std::vector<int>>& generators,
                              const std::string& order) {
    std::string out = "perms " + std::to_string(n) + " " + std::to_string(generators.size()) + "\n";
    for (const auto& g : generators) {
        for (size_t i = 0; i < g.size(); ++i) {
            if (i) out += ' ';
            out += std::to_string(g[i]);
        }
        out += '\n';
    }
    out += "# order " + order + "\n";
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
}

uint64_t fnv1a_digest(const std::string& data) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace twintour

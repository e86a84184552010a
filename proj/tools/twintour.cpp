#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#ifdef TWINTOUR_HAVE_OPENMP
#include <omp.h>
#endif

#include "twintour/cfi.hpp"
#include "twintour/io.hpp"
#include "twintour/isokit.hpp"
#include "twintour/wl.hpp"
#include "twintour/widths.hpp"

using namespace twintour;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;
constexpr int kExitExceeded = 2;
constexpr int kExitUsage = 64;

// Flat key/value report; printed once at the end, as text lines or a flat
// JSON object. Timing is the only nondeterministic field.
class Report {
public:
    explicit Report(bool json) : json_(json), start_(std::chrono::steady_clock::now()) {}

    void add(const std::string& key, const std::string& value) { items_.emplace_back(key, value); }
    void add(const std::string& key, long long value) { add(key, std::to_string(value)); }

    void print() {
        auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - start_)
                           .count();
        add("time_ms", static_cast<long long>(elapsed));
        if (json_) {
            std::cout << "{";
            for (size_t i = 0; i < items_.size(); ++i) {
                if (i) std::cout << ", ";
                std::cout << '"' << items_[i].first << "\": \"" << items_[i].second << '"';
            }
            std::cout << "}\n";
        } else {
            for (const auto& [key, value] : items_) std::cout << key << ": " << value << "\n";
        }
    }

private:
    bool json_;
    std::vector<std::pair<std::string, std::string>> items_;
    std::chrono::steady_clock::time_point start_;
};

std::string hex_digest(const std::string& data) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a_digest(data)));
    return buf;
}

Tournament load_tournament(const std::string& path, Report& report, const std::string& tag) {
    std::string data = read_file(path);
    report.add(tag + "_digest", hex_digest(data));
    std::istringstream in(data);
    return parse_tournament(in);
}

RelStructure load_structure(const std::string& path, Report& report, const std::string& tag) {
    std::string data = read_file(path);
    report.add(tag + "_digest", hex_digest(data));
    std::istringstream in(data);
    return parse_structure_any(in);
}

std::string perm_line(const Perm& p) {
    std::string out;
    for (int i = 0; i < p.size(); ++i) {
        if (i) out += ' ';
        out += std::to_string(p(i));
    }
    return out;
}

std::string parts_line(const Partition& p) {
    std::string out;
    for (int i = 0; i < p.size(); ++i) {
        if (i) out += '|';
        const auto& part = p.part(i);
        for (size_t k = 0; k < part.size(); ++k) {
            if (k) out += ' ';
            out += std::to_string(part[k]);
        }
    }
    return out;
}

int run_iso(const std::string& file_a, const std::string& file_b, int k, bool oracle,
            const std::string& group_out, Report& report) {
    Tournament t1 = load_tournament(file_a, report, "a");
    Tournament t2 = load_tournament(file_b, report, "b");
    IsoResult result = tournament_iso(t1, t2, k);
    if (exceeded(result)) {
        report.add("result", "twin-width-exceeded");
        report.add("failed_level", std::get<TwinWidthExceeded>(result).level);
        return kExitExceeded;
    }
    const IsoSet& iso = iso_of(result);
    if (oracle) {
        IsoSet brute = brute_force_iso(t1, t2);
        bool order_match = (iso.has_value() == brute.has_value()) &&
                           (!iso || iso->group.order() == brute->group.order());
        if (!order_match) {
            report.add("oracle", "MISMATCH");
            report.print();
            std::exit(kExitNegative);
        }
        report.add("oracle", "agree");
    }
    if (!iso) {
        report.add("isomorphic", "no");
        return kExitNegative;
    }
    report.add("isomorphic", "yes");
    report.add("aut_order", iso->group.order().str());
    report.add("rep", perm_line(iso->rep));
    std::string gens;
    std::vector<std::vector<int>> gen_lines;
    for (const auto& g : iso->group.generators()) {
        if (!gens.empty()) gens += ";";
        gens += perm_line(g);
        gen_lines.push_back(g.img);
    }
    report.add("generators", gens);
    if (!group_out.empty()) {
        write_file(group_out,
                   format_perm_group(t1.n(), gen_lines, iso->group.order().str()));
        report.add("group_file", group_out);
    }
    return kExitOk;
}

int run_wl(const std::string& file, const std::string& pair_file, int k, Report& report) {
    Tournament t1 = load_tournament(file, report, "a");
    ColoredDigraph g1 = ColoredDigraph::from_tournament(t1);
    if (pair_file.empty()) {
        StableColoring chi = wl_refine(k, g1);
        report.add("colors", chi.num_colors);
        report.add("rounds", chi.rounds);
        report.add("homogeneous", chi.all_diag_equal() ? "yes" : "no");
        for (auto [color, count] : chi.histogram())
            report.add("color_" + std::to_string(color), count);
        return kExitOk;
    }
    Tournament t2 = load_tournament(pair_file, report, "b");
    if (t1.n() != t2.n()) {
        report.add("distinguished", "yes");
        report.add("reason", "different sizes");
        return kExitOk;
    }
    JointColoring joint = wl_refine_joint(k, g1, ColoredDigraph::from_tournament(t2));
    report.add("colors", joint.first.num_colors);
    for (auto [color, count] : joint.first.histogram())
        report.add("a_color_" + std::to_string(color), count);
    for (auto [color, count] : joint.second.histogram())
        report.add("b_color_" + std::to_string(color), count);
    report.add("distinguished", joint.distinguished ? "yes" : "no");
    return kExitOk;
}

int run_partition_seq(const std::string& file, int k, Report& report) {
    Tournament t = load_tournament(file, report, "input");
    auto result = partition_sequence(t, k);
    if (std::holds_alternative<TwinWidthExceeded>(result)) {
        report.add("result", "twin-width-exceeded");
        report.add("failed_level", std::get<TwinWidthExceeded>(result).level);
        return kExitExceeded;
    }
    const auto& seq = std::get<PartitionSequence>(result);
    report.add("levels", static_cast<long long>(seq.colors.size()));
    for (size_t i = 0; i < seq.colors.size(); ++i)
        report.add("c_" + std::to_string(i + 1), seq.colors[i]);
    for (size_t i = 0; i < seq.levels.size(); ++i)
        report.add("q_" + std::to_string(i), parts_line(seq.levels[i]));
    return kExitOk;
}

int run_tww_verify(const std::string& struct_file, const std::string& seq_file, Report& report) {
    RelStructure a = load_structure(struct_file, report, "structure");
    std::string seq_data = read_file(seq_file);
    report.add("sequence_digest", hex_digest(seq_data));
    std::istringstream in(seq_data);
    ContractionSequence seq = parse_contractions(in);
    int width = verify_contraction(a, seq);
    report.add("width", width);
    return kExitOk;
}

int run_tww_exact(const std::string& struct_file, const std::string& out, Report& report) {
    RelStructure a = load_structure(struct_file, report, "structure");
    auto result = exact_twin_width(a);
    report.add("width", result.width);
    if (!out.empty()) {
        write_file(out, format_contractions(result.sequence));
        report.add("sequence_file", out);
    }
    return kExitOk;
}

int run_convert(const std::string& graph_file, const std::string& from,
                const std::string& input_file, const std::string& to, const std::string& out,
                Report& report) {
    RelStructure a = load_structure(graph_file, report, "graph");
    // Digraph view of the first relation for the converters.
    Digraph g(a.n());
    for (auto [u, v] : a.relation_edges(0)) g.add_edge(u, v);

    std::string input_data = read_file(input_file);
    report.add("input_digest", hex_digest(input_data));
    std::istringstream in(input_data);

    DirectedPathDecomposition dpd;
    DirectedTreeDecomposition dtd;
    bool have_dpd = false;

    if (from == "order") {
        LinearOrder ord = LinearOrder::from_sequence(parse_order(in));
        report.add("cutwidth", cutwidth_of_order(g, ord));
        dpd = dpd_from_order(g, ord);
        have_dpd = true;
    } else if (from == "dpd") {
        dpd = parse_dpd(in);
        dpd.n = a.n();
        have_dpd = true;
    } else if (from == "dtd") {
        dtd = parse_dtd(in);
        dtd.n = a.n();
    } else {
        throw std::invalid_argument("unknown --from kind");
    }

    std::string payload;
    if (to == "dpd") {
        if (!have_dpd) throw std::invalid_argument("cannot convert dtd to dpd");
        auto check = validate_dpd(g, dpd);
        if (!check.valid) throw ValidationException(check.violation);
        report.add("width", dpd.width());
        payload = format_dpd(dpd);
    } else if (to == "dtd") {
        if (have_dpd) {
            auto check = validate_dpd(g, dpd);
            if (!check.valid) throw ValidationException(check.violation);
            dtd = dtd_from_dpd(g, dpd);
        }
        auto check = validate_dtd(g, dtd);
        if (!check.valid) throw ValidationException(check.violation);
        report.add("width", dtd.width());
        payload = format_dtd(dtd);
    } else if (to == "contraction") {
        Tournament t{g};
        ContractionSequence seq;
        if (have_dpd)
            seq = contraction_from_dpd(t, dpd);
        else
            seq = contraction_from_dtd(t, dtd);
        report.add("width", verify_contraction(RelStructure::from_tournament(t), seq));
        payload = format_contractions(seq);
    } else {
        throw std::invalid_argument("unknown --to kind");
    }
    if (!out.empty()) {
        write_file(out, payload);
        report.add("output_file", out);
        report.add("output_digest", hex_digest(payload));
    }
    return kExitOk;
}

int run_gen(const std::string& family, const std::string& base, int k, int twist, int n, int m,
            uint32_t seed, const std::string& out, Report& report) {
    if (family == "cfi") {
        BaseGraph bg;
        ContractionSequence base_seq;
        if (base == "k4") {
            bg = k4_graph();
            base_seq.n = 4;
            base_seq.merges = {{0, 1}, {0, 2}, {0, 3}};
        } else if (base == "wall") {
            if (k < 2) throw std::invalid_argument("gen cfi --base wall needs --k >= 2");
            bg = wall_graph(k);
            base_seq = grid_red_contraction(2 * k + 2, 2 * k + 2);
        } else {
            throw std::invalid_argument("unknown --base (use k4 or wall)");
        }
        CfiInstance inst = cfi_instance(bg, base_seq, twist);
        report.add("n", inst.tournament.n());
        std::string trn = format_tournament(inst.tournament);
        std::string seq = format_contractions(inst.contraction);
        write_file(out + ".trn", trn);
        write_file(out + ".seq", seq);
        report.add("tournament_file", out + ".trn");
        report.add("tournament_digest", hex_digest(trn));
        report.add("sequence_file", out + ".seq");
        report.add("sequence_digest", hex_digest(seq));
        return kExitOk;
    }
    if (family == "grid") {
        RelStructure red = red_structure(toroidal_grid_graph(n, m));
        ContractionSequence seq = grid_red_contraction(n, m);
        std::string red_text = format_struct(red);
        std::string seq_text = format_contractions(seq);
        write_file(out + ".red", red_text);
        write_file(out + ".seq", seq_text);
        report.add("n", red.n());
        report.add("structure_file", out + ".red");
        report.add("structure_digest", hex_digest(red_text));
        report.add("sequence_file", out + ".seq");
        report.add("sequence_digest", hex_digest(seq_text));
        return kExitOk;
    }
    if (family == "circular") {
        if (n % 2 == 0 || n < 3) throw std::invalid_argument("gen circular needs odd --n >= 3");
        int half = (n - 1) / 2;
        Tournament t = circular_tournament_graph(half);
        std::string trn = format_tournament(t);
        write_file(out + ".trn", trn);
        report.add("n", n);
        report.add("tournament_file", out + ".trn");
        report.add("tournament_digest", hex_digest(trn));
        ContractionSequence seq = circular_contraction(half);
        std::string seq_text = format_contractions(seq);
        write_file(out + ".seq", seq_text);
        report.add("sequence_file", out + ".seq");
        report.add("sequence_digest", hex_digest(seq_text));
        report.add("width", verify_contraction(RelStructure::from_tournament(t), seq));
        return kExitOk;
    }
    if (family == "random") {
        std::mt19937 rng(seed);
        Digraph g(n);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                if (rng() & 1)
                    g.add_edge(i, j);
                else
                    g.add_edge(j, i);
            }
        Tournament t(std::move(g));
        std::string trn = format_tournament(t);
        write_file(out + ".trn", trn);
        report.add("n", n);
        report.add("seed", static_cast<long long>(seed));
        report.add("tournament_file", out + ".trn");
        report.add("tournament_digest", hex_digest(trn));
        return kExitOk;
    }
    throw std::invalid_argument("unknown generator family");
}

}  // namespace

int main(int argc, char** argv) {
    if (const char* threads = std::getenv("TWINTOUR_THREADS")) {
#ifdef TWINTOUR_HAVE_OPENMP
        int count = std::atoi(threads);
        if (count > 0) omp_set_num_threads(count);
#else
        (void)threads;
#endif
    }

    CLI::App app{"tournament isomorphism and width toolkit"};
    app.require_subcommand(1);
    bool json = false;
    app.add_flag("--json", json, "emit the report as a flat JSON object");

    auto* iso = app.add_subcommand("iso", "isomorphism test for two tournament files");
    std::string iso_a, iso_b;
    int iso_k = 1;
    bool iso_oracle = false;
    iso->add_option("a", iso_a)->required();
    iso->add_option("b", iso_b)->required();
    iso->add_option("--k", iso_k, "twin width budget")->required();
    iso->add_flag("--oracle", iso_oracle, "cross-check against brute force");
    std::string iso_group_out;
    iso->add_option("-o,--group-out", iso_group_out, "write the automorphism generators here");

    auto* wl = app.add_subcommand("wl", "stable coloring / pair comparison");
    std::string wl_file;
    int wl_k = 2;
    std::vector<std::string> wl_pair;
    wl->add_option("file", wl_file);
    wl->add_option("--k", wl_k);
    wl->add_option("--pair", wl_pair, "two files to compare")->expected(2);

    auto* pseq = app.add_subcommand("partition-seq", "partition sequence of a tournament");
    std::string pseq_file;
    int pseq_k = 1;
    pseq->add_option("file", pseq_file)->required();
    pseq->add_option("--k", pseq_k)->required();

    auto* verify = app.add_subcommand("tww-verify", "verify a contraction sequence");
    std::string verify_struct, verify_seq;
    verify->add_option("structure", verify_struct)->required();
    verify->add_option("sequence", verify_seq)->required();

    auto* exact = app.add_subcommand("tww-exact", "exact twin width (small inputs)");
    std::string exact_file, exact_out;
    exact->add_option("structure", exact_file)->required();
    exact->add_option("-o,--out", exact_out, "write the witness sequence here");

    auto* width = app.add_subcommand("width", "width measure conversions");
    auto* convert = width->add_subcommand("convert", "convert between width certificates");
    std::string conv_graph, conv_from, conv_to, conv_input, conv_out;
    convert->add_option("--graph", conv_graph)->required();
    convert->add_option("--from", conv_from)
        ->required()
        ->check(CLI::IsMember({"order", "dpd", "dtd"}));
    convert->add_option("--to", conv_to)
        ->required()
        ->check(CLI::IsMember({"dpd", "dtd", "contraction"}));
    convert->add_option("--input", conv_input)->required();
    convert->add_option("-o,--out", conv_out);

    auto* gen = app.add_subcommand("gen", "instance generators");
    std::string gen_family, gen_base = "k4", gen_out = "out";
    int gen_k = 2, gen_twist = 0, gen_n = 5, gen_m = 5;
    uint32_t gen_seed = 1;
    gen->add_option("family", gen_family)
        ->required()
        ->check(CLI::IsMember({"cfi", "grid", "circular", "random"}));
    gen->add_option("--base", gen_base);
    gen->add_option("--k", gen_k);
    gen->add_option("--twist", gen_twist);
    gen->add_option("--n", gen_n);
    gen->add_option("--m", gen_m);
    gen->add_option("--seed", gen_seed);
    gen->add_option("-o,--out", gen_out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    Report report(json);
    try {
        int code = kExitUsage;
        if (*iso) {
            report.add("command", "iso");
            code = run_iso(iso_a, iso_b, iso_k, iso_oracle, iso_group_out, report);
        } else if (*wl) {
            report.add("command", "wl");
            if (!wl_pair.empty())
                code = run_wl(wl_pair[0], wl_pair[1], wl_k, report);
            else if (!wl_file.empty())
                code = run_wl(wl_file, "", wl_k, report);
            else
                throw std::invalid_argument("wl needs a file or --pair");
        } else if (*pseq) {
            report.add("command", "partition-seq");
            code = run_partition_seq(pseq_file, pseq_k, report);
        } else if (*verify) {
            report.add("command", "tww-verify");
            code = run_tww_verify(verify_struct, verify_seq, report);
        } else if (*exact) {
            report.add("command", "tww-exact");
            code = run_tww_exact(exact_file, exact_out, report);
        } else if (*width) {
            report.add("command", "width-convert");
            code = run_convert(conv_graph, conv_from, conv_input, conv_to, conv_out, report);
        } else if (*gen) {
            report.add("command", "gen-" + gen_family);
            code = run_gen(gen_family, gen_base, gen_k, gen_twist, gen_n, gen_m, gen_seed,
                           gen_out, report);
        }
        report.print();
        return code;
    } catch (const std::exception& e) {
        report.add("error", e.what());
        report.print();
        return kExitNegative;
    }
}

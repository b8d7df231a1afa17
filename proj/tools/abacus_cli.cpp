// Command-line driver: run | mine | filter | lattice | compare | synth | stats.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "abacus/abacus.hpp"

namespace {

using namespace abacus;

constexpr int exit_failure = 1;
constexpr int exit_usage = 2;

/// `-` selects stdout.
class Output {
public:
    explicit Output(const std::string& path) {
        if (path != "-") file_ = detail::open_output(path);
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::optional<std::ofstream> file_;
};

unsigned threads_from_env() {
    if (const char* v = std::getenv("ABACUS_THREADS")) {
        if (auto n = detail::parse_uint<unsigned>(v); n && *n > 0) return *n;
    }
    return 1;
}

struct DiscovererFlags {
    std::string cd = "labelprop";
    std::string table;
    std::uint64_t seed = 42;
    std::size_t max_iters = 100;

    void attach(CLI::App* cmd) {
        cmd->add_option("--cd", cd, "Community discoverer")
            ->check(CLI::IsMember({"labelprop", "components", "fixed"}))
            ->capture_default_str();
        cmd->add_option("--cd-table", table, "Membership table for --cd fixed (lines: node community [dimension])");
        cmd->add_option("--seed", seed, "Label propagation seed")->capture_default_str();
        cmd->add_option("--max-iters", max_iters, "Label propagation sweep cap")->check(CLI::PositiveNumber)->capture_default_str();
    }

    void check() const {
        if (cd == "fixed" && table.empty()) throw CLI::ValidationError("--cd-table", "required with --cd fixed");
        if (cd != "fixed" && !table.empty()) throw CLI::ValidationError("--cd-table", "only valid with --cd fixed");
    }

    RunConfig config(const AssignmentTable* t) const {
        RunConfig cfg;
        cfg.discoverer = cd == "fixed" ? DiscovererKind::fixed : cd == "components" ? DiscovererKind::connected_components : DiscovererKind::label_propagation;
        cfg.seed = seed;
        cfg.max_iters = max_iters;
        cfg.table = t;
        cfg.threads = threads_from_env();
        return cfg;
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// --- run ------------------------------------------------------------------

struct RunFlags {
    std::string input;
    DiscovererFlags cd;
    std::size_t min_support = 2;
    std::string out = "-";
    std::string lattice_out;
    std::string transactions_out;
};

int cmd_run(const RunFlags& f) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto net = load_edgelist(f.input);
    std::cerr << "loaded " << net.num_nodes() << " nodes, " << net.num_edges() << " edges, " << net.num_dimensions() << " dimensions\n";

    AssignmentTable table;
    if (f.cd.cd == "fixed") table = load_assignment_table(f.cd.table, net);
    auto cfg = f.cd.config(&table);
    cfg.min_support = f.min_support;

    const auto result = run_detailed(net, cfg);
    std::cerr << result.memberships.catalog.size() << " membership items, " << result.communities.size() << " communities in "
              << seconds_since(t0) << " s\n";

    Output out(f.out);
    write_communities(out.stream(), net, result.communities);
    if (!f.lattice_out.empty()) {
        Output lat(f.lattice_out);
        write_lattice(lat.stream(), net.dimensions(), result.communities, build_lattice(std::span<const MultidimCommunity>(result.communities)));
    }
    if (!f.transactions_out.empty()) {
        Output tx(f.transactions_out);
        write_transactions(tx.stream(), result.memberships.db);
    }
    return 0;
}

// --- mine -----------------------------------------------------------------

int cmd_mine(const std::string& transactions, std::size_t min_support, const std::string& out_path) {
    auto in = detail::open_input(transactions);
    const auto db = read_transactions(in);
    const auto patterns = mine_closed(db, min_support);
    std::cerr << db.num_transactions() << " transactions, " << patterns.size() << " closed patterns\n";
    Output out(out_path);
    write_patterns(out.stream(), patterns);
    return 0;
}

// --- filter ---------------------------------------------------------------

struct FilterFlags {
    std::string communities;
    std::string out = "-";
    std::optional<std::size_t> min_support, max_support, min_size, max_size;
    std::optional<double> min_mcd, max_mcd, mcd_below;
};

int cmd_filter(const FilterFlags& f) {
    auto set = load_communities(f.communities);
    FilterBounds b;
    b.support.lo = f.min_support;
    b.support.hi = f.max_support;
    b.size.lo = f.min_size;
    b.size.hi = f.max_size;
    b.mcd.lo = f.min_mcd;
    b.mcd.hi = f.max_mcd;
    if (f.mcd_below) {
        if (f.max_mcd) throw CLI::ValidationError("--mcd-below", "cannot be combined with --max-mcd");
        b.mcd.hi = f.mcd_below;
        b.mcd.hi_strict = true;
    }
    const auto kept = filter(set.communities, b);
    std::cerr << "kept " << kept.size() << " of " << set.communities.size() << " communities\n";
    Output out(f.out);
    write_communities(out.stream(), set.nodes, set.dimensions, kept);
    return 0;
}

// --- lattice --------------------------------------------------------------

int cmd_lattice(const std::string& communities, const std::string& out_path) {
    const auto set = load_communities(communities);
    const auto lattice = build_lattice(std::span<const MultidimCommunity>(set.communities));
    std::cerr << lattice.num_vertices << " vertices, " << lattice.edges.size() << " cover edges\n";
    Output out(out_path);
    write_lattice(out.stream(), set.dimensions, set.communities, lattice);
    return 0;
}

// --- compare --------------------------------------------------------------

struct CompareFlags {
    std::string a;
    std::string b;
    std::string collapse_input;
    DiscovererFlags cd;
    std::string out = "-";
};

int cmd_compare(const CompareFlags& f) {
    const auto a = load_named_node_sets(f.a);
    std::vector<std::vector<std::string>> b;
    if (!f.b.empty()) {
        b = load_named_node_sets(f.b);
    } else {
        const auto net = load_edgelist(f.collapse_input);
        AssignmentTable table;
        if (f.cd.cd == "fixed") table = load_assignment_table(f.cd.table, net);
        const auto cfg = f.cd.config(&table);
        for (const auto& members : collapse_baseline(net, make_discoverer(cfg))) {
            auto& names = b.emplace_back();
            for (auto n : members) names.push_back(net.nodes().name(n));
        }
        std::cerr << "collapse baseline: " << b.size() << " communities\n";
    }
    const auto cmp = compare_node_sets<std::string>(a, b);
    Output out(f.out);
    auto& os = out.stream();
    os << "set,count,ratio\n";
    os << "both," << cmp.both << ',' << detail::format_double(cmp.both_ratio()) << '\n';
    os << "only_a," << cmp.only_a << ',' << detail::format_double(cmp.only_a_ratio()) << '\n';
    os << "only_b," << cmp.only_b << ',' << detail::format_double(cmp.only_b_ratio()) << '\n';
    return 0;
}

// --- synth ----------------------------------------------------------------

int cmd_synth(const std::string& spec_path, const std::string& out_path, const std::string& truth_out) {
    auto in = detail::open_input(spec_path);
    const auto spec = read_synth_spec(in);
    const auto result = generate(spec);
    std::cerr << "generated " << result.network.num_nodes() << " nodes, " << result.network.num_edges() << " edges, "
              << result.truth.size() << " planted groups\n";
    Output out(out_path);
    write_edgelist(out.stream(), result.network);
    if (!truth_out.empty()) {
        Output truth(truth_out);
        write_truth(truth.stream(), result.network, result.truth);
    }
    return 0;
}

// --- stats ----------------------------------------------------------------

int cmd_stats(const std::string& communities, const std::string& out_path) {
    const auto set = load_communities(communities);
    const auto dists = stats(set.communities);
    Output out(out_path);
    write_distributions(out.stream(), dists);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multidimensional community discovery via frequent closed membership itemsets"};
    app.require_subcommand(1);

    RunFlags run_flags;
    auto* run_cmd = app.add_subcommand("run", "Discover multidimensional communities in an edge list");
    run_cmd->add_option("--input", run_flags.input, "Edge list (u v dimension [weight])")->required();
    run_flags.cd.attach(run_cmd);
    run_cmd->add_option("--min-support", run_flags.min_support, "Minimum community size in nodes")->check(CLI::PositiveNumber)->capture_default_str();
    run_cmd->add_option("--out", run_flags.out, "Community records ('-' for stdout)")->capture_default_str();
    run_cmd->add_option("--lattice-out", run_flags.lattice_out, "Lattice export");
    run_cmd->add_option("--transactions-out", run_flags.transactions_out, "Membership transactions export");

    std::string mine_tx, mine_out = "-";
    std::size_t mine_support = 2;
    auto* mine_cmd = app.add_subcommand("mine", "Mine closed itemsets from a transaction file");
    mine_cmd->add_option("--transactions", mine_tx, "One transaction per line, '-' for empty")->required();
    mine_cmd->add_option("--min-support", mine_support, "Minimum support")->check(CLI::PositiveNumber)->capture_default_str();
    mine_cmd->add_option("--out", mine_out, "Pattern lines ('-' for stdout)")->capture_default_str();

    FilterFlags filter_flags;
    auto* filter_cmd = app.add_subcommand("filter", "Select communities by support, size and density");
    filter_cmd->add_option("--communities", filter_flags.communities, "Community records")->required();
    filter_cmd->add_option("--min-support", filter_flags.min_support);
    filter_cmd->add_option("--max-support", filter_flags.max_support);
    filter_cmd->add_option("--min-size", filter_flags.min_size);
    filter_cmd->add_option("--max-size", filter_flags.max_size);
    filter_cmd->add_option("--min-mcd", filter_flags.min_mcd);
    filter_cmd->add_option("--max-mcd", filter_flags.max_mcd);
    filter_cmd->add_option("--mcd-below", filter_flags.mcd_below, "Strict upper bound on density");
    filter_cmd->add_option("--out", filter_flags.out)->capture_default_str();

    std::string lattice_in, lattice_out = "-";
    auto* lattice_cmd = app.add_subcommand("lattice", "Export the inclusion lattice of a community file");
    lattice_cmd->add_option("--communities", lattice_in, "Community records")->required();
    lattice_cmd->add_option("--out", lattice_out)->capture_default_str();

    CompareFlags compare_flags;
    auto* compare_cmd = app.add_subcommand("compare", "Exact node-set comparison of two community sets");
    compare_cmd->add_option("--a", compare_flags.a, "Community records or node-set lines")->required();
    auto* b_opt = compare_cmd->add_option("--b", compare_flags.b, "Community records or node-set lines");
    auto* collapse_opt = compare_cmd->add_option("--collapse-input", compare_flags.collapse_input,
                                                 "Edge list; B is the collapse baseline of this network");
    b_opt->excludes(collapse_opt);
    compare_flags.cd.attach(compare_cmd);
    compare_cmd->add_option("--out", compare_flags.out)->capture_default_str();

    std::string synth_spec, synth_out = "-", synth_truth;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic network from a JSON spec");
    synth_cmd->add_option("--spec", synth_spec, "JSON spec")->required();
    synth_cmd->add_option("--out", synth_out, "Edge list")->capture_default_str();
    synth_cmd->add_option("--truth-out", synth_truth, "Planted groups");

    std::string stats_in, stats_out = "-";
    auto* stats_cmd = app.add_subcommand("stats", "Cumulative distributions of support, size and density");
    stats_cmd->add_option("--communities", stats_in, "Community records")->required();
    stats_cmd->add_option("--out", stats_out, "CSV")->capture_default_str();

    try {
        app.parse(argc, argv);
        if (*run_cmd) run_flags.cd.check();
        if (*compare_cmd) {
            compare_flags.cd.check();
            if (compare_flags.b.empty() && compare_flags.collapse_input.empty())
                throw CLI::ValidationError("--b", "one of --b or --collapse-input is required");
        }
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        if (*run_cmd) return cmd_run(run_flags);
        if (*mine_cmd) return cmd_mine(mine_tx, mine_support, mine_out);
        if (*filter_cmd) return cmd_filter(filter_flags);
        if (*lattice_cmd) return cmd_lattice(lattice_in, lattice_out);
        if (*compare_cmd) return cmd_compare(compare_flags);
        if (*synth_cmd) return cmd_synth(synth_spec, synth_out, synth_truth);
        if (*stats_cmd) return cmd_stats(stats_in, stats_out);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_failure;
    }
    return exit_usage;
}

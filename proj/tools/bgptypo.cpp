// bgptypo: find, explain and clean AS-path prepending typos in RIB snapshots.

#include "bgptypo/classify.hpp"
#include "bgptypo/csv_export.hpp"
#include "bgptypo/errors.hpp"
#include "bgptypo/ingest.hpp"
#include "bgptypo/longitudinal.hpp"
#include "bgptypo/path_model.hpp"
#include "bgptypo/scan.hpp"

#include <CLI11.hpp>

#include <array>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace bgptypo;

namespace {

struct RunConfig {
    std::vector<std::string> snapshot_paths;
    std::string ownership_path;
    std::string registry_path;
    std::string adjacency_path;
    std::string whitelist_path;
    std::string out_dir = "out";
    std::string format = "canonical-text";
    std::uint64_t max_asn = 500'000;
    std::string small_asn_range = "1:12";
    std::uint32_t min_run_type1 = 1;
    bool no_geo = false;
    bool no_inactive = false;
    bool sum_addresses = false;
    unsigned workers = 1;
    std::uint64_t seed = 42;
    double max_error_rate = 0.01;
};

// Relative inputs fall back to $BGPTYPO_DATA_DIR when they do not resolve
// from the working directory.
fs::path resolve_input(const std::string& given) {
    fs::path path(given);
    if (fs::exists(path))
        return path;
    if (const char* root = std::getenv("BGPTYPO_DATA_DIR"); root && path.is_relative()) {
        fs::path alt = fs::path(root) / path;
        if (fs::exists(alt))
            return alt;
    }
    return path;
}

std::ifstream open_input(const std::string& given) {
    fs::path path = resolve_input(given);
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open file: " + path.string());
    return in;
}

ScanConfig make_scan_config(const RunConfig& cfg) {
    ScanConfig scan;
    auto colon = cfg.small_asn_range.find(':');
    bool ok = colon != std::string::npos;
    if (ok) {
        try {
            scan.small_asn_min = std::stoull(cfg.small_asn_range.substr(0, colon));
            scan.small_asn_max = std::stoull(cfg.small_asn_range.substr(colon + 1));
        } catch (const std::exception&) {
            ok = false;
        }
    }
    if (!ok || scan.small_asn_min < 1 || scan.small_asn_min > scan.small_asn_max)
        throw DomainError("bad --small-asn-range, expected LO:HI with LO >= 1, got '" +
                          cfg.small_asn_range + "'");
    if (cfg.max_asn < 1)
        throw DomainError("--max-asn must be >= 1");
    scan.max_assigned_asn = cfg.max_asn;
    scan.min_run_for_type1 = cfg.min_run_type1;
    return scan;
}

struct LoadedMonth {
    Snapshot snapshot;
    LoadStats stats;
};

std::vector<LoadedMonth> load_months(const RunConfig& cfg) {
    if (cfg.snapshot_paths.empty())
        throw DomainError("at least one --snapshot is required");
    LoadOptions options;
    options.max_error_rate = cfg.max_error_rate;

    std::vector<LoadedMonth> months;
    for (const std::string& given : cfg.snapshot_paths) {
        LoadedMonth month;
        month.snapshot =
            load_snapshot_file(resolve_input(given), cfg.format, options, &month.stats);
        months.push_back(std::move(month));
    }
    std::sort(months.begin(), months.end(), [](const LoadedMonth& a, const LoadedMonth& b) {
        return a.snapshot.label < b.snapshot.label;
    });
    for (std::size_t i = 0; i + 1 < months.size(); ++i)
        if (months[i].snapshot.label == months[i + 1].snapshot.label)
            throw DomainError("two snapshots share the label " + months[i].snapshot.label);
    return months;
}

void print_warnings(const LoadStats& stats) {
    for (const std::string& w : stats.warnings)
        std::cout << "warning:" << w << '\n';
    if (stats.skipped > 0)
        std::cout << "warning:" << stats.skipped << " malformed lines skipped\n";
}

UpstreamWhitelist obtain_whitelist(const RunConfig& cfg, const ScanConfig& scan,
                                   const std::vector<LoadedMonth>& months,
                                   const OwnershipDb* ownership) {
    if (!cfg.whitelist_path.empty())
        return load_whitelist_file(resolve_input(cfg.whitelist_path), scan.small_asn_min,
                                   scan.small_asn_max);
    if (ownership) {
        std::cout << "warning:no --whitelist given; deriving upstreams from the input months\n";
        std::vector<Snapshot> snapshots;
        for (const LoadedMonth& m : months)
            snapshots.push_back(m.snapshot);
        UpstreamWhitelist wl = build_upstream_whitelist(snapshots, *ownership, scan);
        if (wl.empty())
            std::cout << "warning:derived whitelist is empty\n";
        return wl;
    }
    std::cout << "warning:no --whitelist and no --ownership; every small-origin route will be "
                 "flagged\n";
    return {};
}

struct Databases {
    std::optional<OwnershipDb> ownership;
    std::optional<AsnRegistry> registry;
    std::optional<CountryAdjacency> adjacency;
};

Databases load_databases(const RunConfig& cfg) {
    Databases dbs;
    if (!cfg.ownership_path.empty())
        dbs.ownership = load_ownership_file(resolve_input(cfg.ownership_path));
    if (!cfg.registry_path.empty())
        dbs.registry = load_registry_file(resolve_input(cfg.registry_path));
    if (!cfg.adjacency_path.empty())
        dbs.adjacency = load_adjacency_file(resolve_input(cfg.adjacency_path));
    return dbs;
}

ClassifyContext make_context(const RunConfig& cfg, const Databases& dbs,
                             const Snapshot& snapshot) {
    ClassifyContext ctx;
    ctx.ownership = dbs.ownership ? &*dbs.ownership : nullptr;
    ctx.registry = dbs.registry ? &*dbs.registry : nullptr;
    ctx.adjacency = dbs.adjacency ? &*dbs.adjacency : nullptr;
    ctx.active_origins = collect_active_origins(snapshot);
    ctx.enable_geo = !cfg.no_geo;
    ctx.enable_inactive = !cfg.no_inactive;
    if (ctx.enable_geo && (!ctx.registry || !ctx.adjacency)) {
        std::cout << "warning:geo rule disabled (needs --registry and --adjacency)\n";
        ctx.enable_geo = false;
    }
    if (ctx.enable_inactive && !ctx.registry) {
        std::cout << "warning:inactive rule disabled (needs --registry)\n";
        ctx.enable_inactive = false;
    }
    return ctx;
}

void print_scan_summary(const Snapshot& snapshot, const CandidateSet& set) {
    std::cout << "snapshot:" << snapshot.label << '\n';
    std::cout << "entries:" << snapshot.entries.size() << '\n';
    std::cout << "skipped_as_set:" << set.skipped_as_set << '\n';
    std::cout << "candidates:" << set.total() << '\n';
    for (int t = 1; t <= 4; ++t)
        std::cout << "type" << t << ":" << set.count_by_type[t] << '\n';
}

int cmd_scan(const RunConfig& cfg) {
    ScanConfig scan = make_scan_config(cfg);
    auto months = load_months(cfg);
    Databases dbs = load_databases(cfg);
    UpstreamWhitelist whitelist =
        obtain_whitelist(cfg, scan, months, dbs.ownership ? &*dbs.ownership : nullptr);

    for (const LoadedMonth& month : months) {
        print_warnings(month.stats);
        CandidateSet set = scan_snapshot(month.snapshot, whitelist, scan, cfg.workers);
        fs::path out = fs::path(cfg.out_dir) / month.snapshot.label / "candidates.csv";
        atomic_write_file(out,
                          [&](std::ostream& s) { write_candidates_csv(s, month.snapshot, set); });
        print_scan_summary(month.snapshot, set);
        std::cout << "wrote:" << out.string() << '\n';
    }
    return 0;
}

struct ClassifiedMonth {
    const Snapshot* snapshot = nullptr;
    CandidateSet candidates;
    std::vector<Verdict> verdicts;
};

ClassifiedMonth classify_month(const RunConfig& cfg, const ScanConfig& scan, const Databases& dbs,
                               const UpstreamWhitelist& whitelist, const Snapshot& snapshot) {
    ClassifiedMonth month;
    month.snapshot = &snapshot;
    month.candidates = scan_snapshot(snapshot, whitelist, scan, cfg.workers);
    ClassifyContext ctx = make_context(cfg, dbs, snapshot);
    month.verdicts = classify_all(snapshot, month.candidates, ctx, cfg.workers);
    return month;
}

void print_classify_summary(const ClassifiedMonth& month) {
    std::cout << "snapshot:" << month.snapshot->label << '\n';
    std::cout << "candidates:" << month.candidates.total() << '\n';

    // attribution[type][rule-ish bucket]
    std::array<std::array<std::size_t, 6>, 5> att{};
    std::size_t typo = 0, not_typo = 0, unknown = 0;
    for (std::size_t i = 0; i < month.candidates.candidates.size(); ++i) {
        int t = static_cast<int>(month.candidates.candidates[i].type);
        const Verdict& v = month.verdicts[i];
        switch (v.outcome) {
        case Outcome::Typo:
            ++typo;
            ++att[t][static_cast<int>(v.rule)];
            break;
        case Outcome::NotTypo:
            ++not_typo;
            ++att[t][4];
            break;
        case Outcome::Unknown:
            ++unknown;
            ++att[t][5];
            break;
        }
    }
    for (int t = 1; t <= 4; ++t) {
        std::cout << "type" << t << ".loop:" << att[t][static_cast<int>(Rule::Loop)] << '\n';
        std::cout << "type" << t << ".origin:" << att[t][static_cast<int>(Rule::Origin)] << '\n';
        std::cout << "type" << t << ".geo:" << att[t][static_cast<int>(Rule::Geo)] << '\n';
        std::cout << "type" << t << ".inactive:" << att[t][static_cast<int>(Rule::Inactive)]
                  << '\n';
        std::cout << "type" << t << ".not_typo:" << att[t][4] << '\n';
        std::cout << "type" << t << ".unknown:" << att[t][5] << '\n';
    }
    std::cout << "typo:" << typo << '\n';
    std::cout << "not_typo:" << not_typo << '\n';
    std::cout << "unknown:" << unknown << '\n';
}

int cmd_classify(const RunConfig& cfg) {
    ScanConfig scan = make_scan_config(cfg);
    auto months = load_months(cfg);
    Databases dbs = load_databases(cfg);
    UpstreamWhitelist whitelist =
        obtain_whitelist(cfg, scan, months, dbs.ownership ? &*dbs.ownership : nullptr);

    for (const LoadedMonth& loaded : months) {
        print_warnings(loaded.stats);
        ClassifiedMonth month = classify_month(cfg, scan, dbs, whitelist, loaded.snapshot);
        fs::path out = fs::path(cfg.out_dir) / loaded.snapshot.label / "verdicts.csv";
        atomic_write_file(out, [&](std::ostream& s) {
            write_verdicts_csv(s, loaded.snapshot, month.candidates, month.verdicts);
        });
        print_classify_summary(month);
        std::cout << "wrote:" << out.string() << '\n';
    }
    return 0;
}

int cmd_clean(const RunConfig& cfg) {
    ScanConfig scan = make_scan_config(cfg);
    auto months = load_months(cfg);
    Databases dbs = load_databases(cfg);
    UpstreamWhitelist whitelist =
        obtain_whitelist(cfg, scan, months, dbs.ownership ? &*dbs.ownership : nullptr);

    for (const LoadedMonth& loaded : months) {
        print_warnings(loaded.stats);
        ClassifiedMonth month = classify_month(cfg, scan, dbs, whitelist, loaded.snapshot);
        CleanResult cleaned = repair_snapshot(loaded.snapshot, month.candidates, month.verdicts);
        fs::path out = fs::path(cfg.out_dir) / (loaded.snapshot.label + ".cleaned.rib");
        atomic_write_file(
            out, [&](std::ostream& s) { write_snapshot_canonical(s, cleaned.snapshot); });
        std::cout << "snapshot:" << loaded.snapshot.label << '\n';
        std::cout << "lines_changed:" << cleaned.entries_changed << '\n';
        std::cout << "cleaned:" << out.string() << '\n';
    }
    return 0;
}

int cmd_trend(const RunConfig& cfg) {
    ScanConfig scan = make_scan_config(cfg);
    auto months = load_months(cfg);
    Databases dbs = load_databases(cfg);
    UpstreamWhitelist whitelist =
        obtain_whitelist(cfg, scan, months, dbs.ownership ? &*dbs.ownership : nullptr);

    std::vector<MonthlyMetrics> metrics;
    std::vector<MonthKeys> month_keys;
    std::vector<std::uint64_t> offenders;
    fs::path out_dir(cfg.out_dir);

    bool first_prevalence = true;
    std::string prevalence_csv, histogram_csv, cdf_csv;
    for (const LoadedMonth& loaded : months) {
        print_warnings(loaded.stats);
        ClassifiedMonth month = classify_month(cfg, scan, dbs, whitelist, loaded.snapshot);

        MonthlyMetrics m = monthly_metrics(loaded.snapshot, month.candidates, month.verdicts);
        if (cfg.sum_addresses) {
            // Comparison mode: count overlapping blocks once per announcement.
            for (int t = 1; t <= 4; ++t) {
                std::set<Prefix> prefixes;
                for (std::size_t i = 0; i < month.candidates.candidates.size(); ++i)
                    if (month.verdicts[i].outcome == Outcome::Typo &&
                        static_cast<int>(month.candidates.candidates[i].type) == t)
                        prefixes.insert(
                            loaded.snapshot.entries[month.candidates.candidates[i].entry_index]
                                .prefix);
                std::vector<Prefix> list(prefixes.begin(), prefixes.end());
                m.by_type[t].addresses = address_count_sum(list);
            }
        }
        metrics.push_back(m);
        month_keys.push_back(typo_keys(loaded.snapshot, month.candidates, month.verdicts));

        for (std::size_t i = 0; i < month.candidates.candidates.size(); ++i) {
            const TypoCandidate& c = month.candidates.candidates[i];
            if (c.type == TypoType::PrependCount && month.verdicts[i].outcome == Outcome::Typo)
                offenders.push_back(c.reference.value);
        }

        PrevalenceStats prevalence =
            prevalence_stats(loaded.snapshot, month.candidates, month.verdicts);
        std::ostringstream a, b, c;
        write_prevalence_csv(a, loaded.snapshot.label, prevalence);
        write_prevalence_histogram_csv(b, loaded.snapshot.label, prevalence);
        write_prevalence_cdf_csv(c, loaded.snapshot.label, prevalence);
        auto append = [&](std::string& dst, const std::string& block) {
            if (first_prevalence)
                dst += block;
            else // drop the header line on subsequent months
                dst += block.substr(block.find('\n') + 1);
        };
        append(prevalence_csv, a.str());
        append(histogram_csv, b.str());
        append(cdf_csv, c.str());
        first_prevalence = false;
    }

    atomic_write_file(out_dir / "metrics.csv",
                      [&](std::ostream& s) { write_metrics_csv(s, metrics); });
    atomic_write_file(out_dir / "prevalence.csv", [&](std::ostream& s) { s << prevalence_csv; });
    atomic_write_file(out_dir / "prevalence_histogram.csv",
                      [&](std::ostream& s) { s << histogram_csv; });
    atomic_write_file(out_dir / "prevalence_cdf.csv", [&](std::ostream& s) { s << cdf_csv; });

    PersistenceMatrix matrix = persistence_matrix(month_keys);
    atomic_write_file(out_dir / "persistence.csv",
                      [&](std::ostream& s) { write_persistence_csv(s, matrix); });

    if (dbs.registry) {
        CountryBreakdown breakdown = country_breakdown(offenders, *dbs.registry);
        atomic_write_file(out_dir / "countries.csv",
                          [&](std::ostream& s) { write_countries_csv(s, breakdown); });
    } else {
        std::cout << "warning:countries.csv skipped (needs --registry)\n";
    }

    std::cout << "months:" << months.size() << '\n';
    if (month_keys.size() < 2) {
        std::cout << "warning:retention needs at least 2 months; retention.csv skipped\n";
        return 0;
    }
    auto series = retention_series(month_keys);
    atomic_write_file(out_dir / "retention.csv",
                      [&](std::ostream& s) { write_retention_csv(s, series); });
    std::cout << "retention_rows:" << series.size() << '\n';

    double sum = 0.0;
    std::size_t n = 0;
    for (const RetentionPoint& point : series)
        for (int t = 1; t <= 4; ++t)
            if (point.by_type[t]) {
                sum += *point.by_type[t];
                ++n;
            }
    if (n == 0) {
        std::cout << "warning:no retention data; duration not estimated\n";
        return 0;
    }
    double p = sum / static_cast<double>(n);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", p);
    std::cout << "mean_retention:" << buf << '\n';
    if (p >= 1.0)
        std::cout << "duration_months:inf (p=1)\n";
    else
        std::cout << "duration_months:" << geometric_duration(p) << '\n';
    return 0;
}

int cmd_simulate_duration(const RunConfig& cfg, double survival, std::size_t lifetimes) {
    std::cout << "survival:" << survival << '\n';
    std::cout << "lifetimes:" << lifetimes << '\n';
    std::cout << "seed:" << cfg.seed << '\n';
    double mean = simulate_geometric_lifetimes(survival, lifetimes, cfg.seed);
    std::cout << "simulated_mean_months:" << mean << '\n';
    std::cout << "analytic_months:" << geometric_duration(survival) << '\n';
    return 0;
}

void add_common_options(CLI::App* cmd, RunConfig& cfg, bool wants_snapshots) {
    if (wants_snapshots)
        cmd->add_option("--snapshot", cfg.snapshot_paths, "RIB snapshot file (repeatable)")
            ->required();
    cmd->add_option("--ownership", cfg.ownership_path, "prefix<TAB>owner-ASN file");
    cmd->add_option("--registry", cfg.registry_path, "ASN<TAB>country file");
    cmd->add_option("--adjacency", cfg.adjacency_path, "countryA<TAB>countryB neighbor file");
    cmd->add_option("--whitelist", cfg.whitelist_path, "stub-ASN<TAB>upstream-ASN file");
    cmd->add_option("--out-dir", cfg.out_dir, "output directory")->capture_default_str();
    cmd->add_option("--format", cfg.format, "snapshot input format")->capture_default_str();
    cmd->add_option("--max-asn", cfg.max_asn, "largest plausibly assigned ASN")
        ->capture_default_str();
    cmd->add_option("--small-asn-range", cfg.small_asn_range,
                    "origin range scanned for prepend-count typos")
        ->capture_default_str();
    cmd->add_option("--min-run-type1", cfg.min_run_type1,
                    "minimum upstream run length for a prepend-count match")
        ->capture_default_str();
    cmd->add_flag("--no-geo", cfg.no_geo, "disable the geographic-sandwich rule");
    cmd->add_flag("--no-inactive", cfg.no_inactive, "disable the inactive-ASN rule");
    cmd->add_flag("--sum-addresses", cfg.sum_addresses,
                  "report address sums instead of the union");
    cmd->add_option("--workers", cfg.workers, "worker threads")->capture_default_str();
    cmd->add_option("--seed", cfg.seed, "random seed for simulation")->capture_default_str();
    cmd->add_option("--max-error-rate", cfg.max_error_rate,
                    "tolerated malformed-line rate per snapshot")
        ->capture_default_str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"AS-path prepending typo scanner for BGP RIB snapshots"};
    app.require_subcommand(1);
    // key=value file with one [subcommand] section per command; flags given
    // on the command line override it.
    app.set_config("--config", "", "configuration file (give before the subcommand)");

    RunConfig cfg;
    double survival = 0.8;
    std::size_t lifetimes = 10'000;

    CLI::App* scan = app.add_subcommand("scan", "extract suspected typo pairs");
    add_common_options(scan, cfg, true);
    CLI::App* classify = app.add_subcommand("classify", "scan and rule on every candidate");
    add_common_options(classify, cfg, true);
    CLI::App* clean = app.add_subcommand("clean", "write snapshots with confirmed typos repaired");
    add_common_options(clean, cfg, true);
    CLI::App* trend = app.add_subcommand("trend", "multi-month impact and persistence reports");
    add_common_options(trend, cfg, true);
    CLI::App* simulate =
        app.add_subcommand("simulate-duration", "simulate typo lifetimes under monthly survival");
    add_common_options(simulate, cfg, false);
    simulate->add_option("--survival", survival, "month-to-month survival probability")
        ->capture_default_str();
    simulate->add_option("--lifetimes", lifetimes, "number of simulated lifetimes")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }

    try {
        if (scan->parsed())
            return cmd_scan(cfg);
        if (classify->parsed())
            return cmd_classify(cfg);
        if (clean->parsed())
            return cmd_clean(cfg);
        if (trend->parsed())
            return cmd_trend(cfg);
        if (simulate->parsed())
            return cmd_simulate_duration(cfg, survival, lifetimes);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

#pragma once

#include "bgptypo/classify.hpp"
#include "bgptypo/databases.hpp"
#include "bgptypo/path_model.hpp"
#include "bgptypo/scan.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace bgptypo {

/// Identity of a typo across months: the token pair, never the prefix.
/// For prepend-count typos the reference is the offending ASN left of the
/// written digit.
struct TypoKey {
    TypoType type = TypoType::SwapDigits;
    std::string suspect;
    std::string reference;

    friend auto operator<=>(const TypoKey&, const TypoKey&) = default;
};

TypoKey key_of(const TypoCandidate& candidate);

struct MonthlyMetrics {
    struct PerType {
        std::size_t prefixes = 0;
        std::size_t keys = 0; // pairs; distinct offender ASNs for type 1
        std::uint64_t addresses = 0;
    };
    std::string month;
    std::array<PerType, 5> by_type{}; // indexed by int(TypoType)
};

/// Impact counts for one classified month; only Typo verdicts contribute.
MonthlyMetrics monthly_metrics(const Snapshot& snapshot, const CandidateSet& candidates,
                               std::span<const Verdict> verdicts);

struct MonthKeys {
    std::string label;
    std::set<TypoKey> keys;
};

MonthKeys typo_keys(const Snapshot& snapshot, const CandidateSet& candidates,
                    std::span<const Verdict> verdicts);

/// Presence of each baseline-month key across the following months.
struct PersistenceMatrix {
    std::vector<TypoKey> rows;       // keys of the baseline month, sorted
    std::vector<std::string> months; // baseline first
    std::vector<std::vector<bool>> present;
};

/// Throws DomainError unless month labels strictly increase.
PersistenceMatrix persistence_matrix(std::span<const MonthKeys> months);

struct RetentionPoint {
    std::string from;
    std::string to;
    // Fraction of month-x keys still present in month x+1, per type; absent
    // when month x had none of that type.
    std::array<std::optional<double>, 5> by_type{};
};

/// Throws DomainError with fewer than two months.
std::vector<RetentionPoint> retention_series(std::span<const MonthKeys> months);

/// Mean lifetime, in months, of a typo that survives month-to-month with
/// probability p. Throws DomainError outside 0 <= p < 1.
double geometric_duration(double p);

/// Empirical mean of n simulated lifetimes with monthly survival p.
double simulate_geometric_lifetimes(double p, std::size_t n, std::uint64_t seed);

struct PrevalenceRow {
    TypoKey key;
    std::size_t collectors_with_typo = 0;
    std::size_t collectors_with_prefix = 0;
    double ratio() const {
        return collectors_with_prefix == 0
                   ? 0.0
                   : static_cast<double>(collectors_with_typo) /
                         static_cast<double>(collectors_with_prefix);
    }
};

struct PrevalenceStats {
    std::vector<PrevalenceRow> rows; // sorted by key
    // Per type: absolute collector count -> number of keys seen by exactly
    // that many collectors.
    std::array<std::map<std::size_t, std::size_t>, 5> histogram{};
    // Per type: (percent threshold, fraction of keys seen by at least that
    // share of the prefix's collectors), thresholds 0,5,...,100.
    std::array<std::vector<std::pair<double, double>>, 5> cdf{};
    std::size_t consistency_errors = 0;
};

/// How far each confirmed typo propagated: collectors carrying it vs
/// collectors carrying the affected prefixes at all.
PrevalenceStats prevalence_stats(const Snapshot& snapshot, const CandidateSet& candidates,
                                 std::span<const Verdict> verdicts);

struct CountryBreakdown {
    std::map<std::string, std::size_t> offenders;     // country -> distinct offender ASNs
    std::map<std::string, double> registry_share_pct; // country -> share of all registered ASNs
    std::size_t unregistered_offenders = 0;
};

/// Registration countries of the ASNs that wrote a prepend-count typo,
/// with the registry's per-country shares as the comparison baseline.
CountryBreakdown country_breakdown(const CandidateSet& candidates,
                                   std::span<const Verdict> verdicts,
                                   const AsnRegistry& registry);

/// Same, from an already-collected offender set (e.g. unioned over months).
CountryBreakdown country_breakdown(std::span<const std::uint64_t> offender_asns,
                                   const AsnRegistry& registry);

} // namespace bgptypo

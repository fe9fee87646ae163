#include "bgptypo/longitudinal.hpp"

#include "bgptypo/errors.hpp"

#include <algorithm>
#include <random>
#include <unordered_map>
#include <unordered_set>

namespace bgptypo {

TypoKey key_of(const TypoCandidate& candidate) {
    return TypoKey{candidate.type, candidate.suspect.text, candidate.reference.text};
}

MonthlyMetrics monthly_metrics(const Snapshot& snapshot, const CandidateSet& candidates,
                               std::span<const Verdict> verdicts) {
    MonthlyMetrics metrics;
    metrics.month = snapshot.label;

    std::array<std::set<Prefix>, 5> prefixes;
    std::array<std::set<TypoKey>, 5> keys;
    std::array<std::set<std::string>, 5> type1_offenders;

    for (std::size_t i = 0; i < candidates.candidates.size(); ++i) {
        if (verdicts[i].outcome != Outcome::Typo)
            continue;
        const TypoCandidate& c = candidates.candidates[i];
        int t = static_cast<int>(c.type);
        prefixes[t].insert(snapshot.entries[c.entry_index].prefix);
        keys[t].insert(key_of(c));
        if (c.type == TypoType::PrependCount)
            type1_offenders[t].insert(c.reference.text);
    }

    for (int t = 1; t <= 4; ++t) {
        auto& per = metrics.by_type[t];
        per.prefixes = prefixes[t].size();
        per.keys = t == static_cast<int>(TypoType::PrependCount) ? type1_offenders[t].size()
                                                                 : keys[t].size();
        std::vector<Prefix> list(prefixes[t].begin(), prefixes[t].end());
        per.addresses = address_count(list);
    }
    return metrics;
}

MonthKeys typo_keys(const Snapshot& snapshot, const CandidateSet& candidates,
                    std::span<const Verdict> verdicts) {
    MonthKeys out;
    out.label = snapshot.label;
    for (std::size_t i = 0; i < candidates.candidates.size(); ++i)
        if (verdicts[i].outcome == Outcome::Typo)
            out.keys.insert(key_of(candidates.candidates[i]));
    return out;
}

namespace {

void require_chronological(std::span<const MonthKeys> months) {
    for (std::size_t i = 0; i + 1 < months.size(); ++i)
        if (!(months[i].label < months[i + 1].label))
            throw DomainError("months out of order: " + months[i].label + " then " +
                              months[i + 1].label);
}

} // namespace

PersistenceMatrix persistence_matrix(std::span<const MonthKeys> months) {
    require_chronological(months);
    PersistenceMatrix matrix;
    if (months.empty())
        return matrix;
    matrix.rows.assign(months.front().keys.begin(), months.front().keys.end());
    for (const MonthKeys& m : months)
        matrix.months.push_back(m.label);
    matrix.present.resize(matrix.rows.size());
    for (std::size_t r = 0; r < matrix.rows.size(); ++r) {
        matrix.present[r].resize(months.size());
        for (std::size_t m = 0; m < months.size(); ++m)
            matrix.present[r][m] = months[m].keys.count(matrix.rows[r]) != 0;
    }
    return matrix;
}

std::vector<RetentionPoint> retention_series(std::span<const MonthKeys> months) {
    if (months.size() < 2)
        throw DomainError("retention needs at least two months");
    require_chronological(months);

    std::vector<RetentionPoint> series;
    for (std::size_t i = 0; i + 1 < months.size(); ++i) {
        RetentionPoint point;
        point.from = months[i].label;
        point.to = months[i + 1].label;
        std::array<std::size_t, 5> have{};
        std::array<std::size_t, 5> kept{};
        for (const TypoKey& key : months[i].keys) {
            int t = static_cast<int>(key.type);
            ++have[t];
            if (months[i + 1].keys.count(key) != 0)
                ++kept[t];
        }
        for (int t = 1; t <= 4; ++t)
            if (have[t] > 0)
                point.by_type[t] = static_cast<double>(kept[t]) / static_cast<double>(have[t]);
        series.push_back(std::move(point));
    }
    return series;
}

double geometric_duration(double p) {
    if (p < 0.0 || p >= 1.0)
        throw DomainError("survival probability must be in [0,1)");
    // Scaled by 10 so one-decimal retention fractions divide exactly.
    return 10.0 / (10.0 - 10.0 * p);
}

double simulate_geometric_lifetimes(double p, std::size_t n, std::uint64_t seed) {
    if (p < 0.0 || p >= 1.0)
        throw DomainError("survival probability must be in [0,1)");
    if (n == 0)
        throw DomainError("need at least one lifetime");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::uint64_t total_months = 0;
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t months = 1;
        while (uniform(rng) < p)
            ++months;
        total_months += months;
    }
    return static_cast<double>(total_months) / static_cast<double>(n);
}

PrevalenceStats prevalence_stats(const Snapshot& snapshot, const CandidateSet& candidates,
                                 std::span<const Verdict> verdicts) {
    PrevalenceStats stats;

    // Collectors carrying each prefix at all.
    std::map<Prefix, std::set<std::string>> prefix_collectors;
    for (const RouteEntry& entry : snapshot.entries)
        prefix_collectors[entry.prefix].insert(entry.collector);

    struct KeyAgg {
        std::set<std::string> with_typo;
        std::set<Prefix> prefixes;
    };
    std::map<TypoKey, KeyAgg> agg;

    for (const auto& occ : candidates.occurrences) {
        if (verdicts[occ.candidate].outcome != Outcome::Typo)
            continue;
        const TypoCandidate& c = candidates.candidates[occ.candidate];
        const RouteEntry& entry = snapshot.entries[occ.entry];
        KeyAgg& a = agg[key_of(c)];
        a.with_typo.insert(entry.collector);
        a.prefixes.insert(entry.prefix);
    }

    for (auto& [key, a] : agg) {
        std::set<std::string> carrying;
        for (const Prefix& p : a.prefixes) {
            auto it = prefix_collectors.find(p);
            if (it != prefix_collectors.end())
                carrying.insert(it->second.begin(), it->second.end());
        }
        if (carrying.empty()) {
            ++stats.consistency_errors; // a typo was seen on a prefix nobody carries
            continue;
        }
        stats.rows.push_back(PrevalenceRow{key, a.with_typo.size(), carrying.size()});
    }

    for (const PrevalenceRow& row : stats.rows)
        ++stats.histogram[static_cast<int>(row.key.type)][row.collectors_with_typo];

    for (int t = 1; t <= 4; ++t) {
        std::vector<double> ratios;
        for (const PrevalenceRow& row : stats.rows)
            if (static_cast<int>(row.key.type) == t)
                ratios.push_back(row.ratio() * 100.0);
        if (ratios.empty())
            continue;
        for (int pct = 0; pct <= 100; pct += 5) {
            std::size_t at_least = std::count_if(ratios.begin(), ratios.end(),
                                                 [&](double r) { return r >= double(pct); });
            stats.cdf[t].emplace_back(double(pct), static_cast<double>(at_least) /
                                                       static_cast<double>(ratios.size()));
        }
    }
    return stats;
}

CountryBreakdown country_breakdown(std::span<const std::uint64_t> offender_asns,
                                   const AsnRegistry& registry) {
    CountryBreakdown breakdown;
    std::unordered_set<std::uint64_t> distinct(offender_asns.begin(), offender_asns.end());
    for (std::uint64_t asn : distinct) {
        if (auto country = registry.country_of(asn))
            ++breakdown.offenders[*country];
        else
            ++breakdown.unregistered_offenders;
    }

    std::size_t total = registry.size();
    if (total > 0)
        for (const auto& [country, count] : registry.country_counts())
            breakdown.registry_share_pct[country] =
                100.0 * static_cast<double>(count) / static_cast<double>(total);
    return breakdown;
}

CountryBreakdown country_breakdown(const CandidateSet& candidates,
                                   std::span<const Verdict> verdicts,
                                   const AsnRegistry& registry) {
    std::vector<std::uint64_t> offenders;
    for (std::size_t i = 0; i < candidates.candidates.size(); ++i) {
        const TypoCandidate& c = candidates.candidates[i];
        if (c.type != TypoType::PrependCount || verdicts[i].outcome != Outcome::Typo)
            continue;
        offenders.push_back(c.reference.value);
    }
    return country_breakdown(offenders, registry);
}

} // namespace bgptypo

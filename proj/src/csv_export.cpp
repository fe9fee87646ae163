#include "bgptypo/csv_export.hpp"

#include "bgptypo/errors.hpp"

#include <cstdio>
#include <fstream>

namespace bgptypo {

namespace {

std::string csv_field(const std::string& value) {
    if (value.find_first_of(",\"\n") == std::string::npos)
        return value;
    std::string quoted = "\"";
    for (char c : value) {
        if (c == '"')
            quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

std::string fixed(double value, int places = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", places, value);
    return buf;
}

std::string key_text(const TypoKey& key) {
    return std::to_string(static_cast<int>(key.type)) + "/" + key.suspect + "/" + key.reference;
}

} // namespace

void write_candidates_csv(std::ostream& out, const Snapshot& snapshot,
                          const CandidateSet& candidates) {
    out << "typo_type,prefix,suspect,reference,position,collector,peer_asn,path\n";
    for (const TypoCandidate& c : candidates.candidates) {
        const RouteEntry& entry = snapshot.entries[c.entry_index];
        out << static_cast<int>(c.type) << ',' << entry.prefix.to_string() << ',' << c.suspect.text
            << ',' << c.reference.text << ',' << c.position << ',' << csv_field(entry.collector)
            << ',' << entry.peer_asn.text << ',' << csv_field(entry.path.to_string()) << '\n';
    }
}

void write_verdicts_csv(std::ostream& out, const Snapshot& snapshot,
                        const CandidateSet& candidates, std::span<const Verdict> verdicts) {
    out << "typo_type,prefix,suspect,reference,outcome,rule,detail\n";
    for (std::size_t i = 0; i < candidates.candidates.size(); ++i) {
        const TypoCandidate& c = candidates.candidates[i];
        const Verdict& v = verdicts[i];
        const RouteEntry& entry = snapshot.entries[c.entry_index];
        out << static_cast<int>(c.type) << ',' << entry.prefix.to_string() << ',' << c.suspect.text
            << ',' << c.reference.text << ',' << to_string(v.outcome) << ',' << to_string(v.rule)
            << ',' << csv_field(v.detail) << '\n';
    }
}

void write_metrics_csv(std::ostream& out, std::span<const MonthlyMetrics> metrics) {
    out << "month,type,prefixes,keys,addresses\n";
    for (const MonthlyMetrics& m : metrics)
        for (int t = 1; t <= 4; ++t)
            out << m.month << ',' << t << ',' << m.by_type[t].prefixes << ',' << m.by_type[t].keys
                << ',' << m.by_type[t].addresses << '\n';
}

void write_retention_csv(std::ostream& out, std::span<const RetentionPoint> series) {
    out << "from_month,to_month,type,retention_pct\n";
    for (const RetentionPoint& p : series)
        for (int t = 1; t <= 4; ++t)
            if (p.by_type[t])
                out << p.from << ',' << p.to << ',' << t << ',' << fixed(*p.by_type[t] * 100.0)
                    << '\n';
}

void write_persistence_csv(std::ostream& out, const PersistenceMatrix& matrix) {
    out << "key,month,present\n";
    for (std::size_t r = 0; r < matrix.rows.size(); ++r)
        for (std::size_t m = 0; m < matrix.months.size(); ++m)
            out << csv_field(key_text(matrix.rows[r])) << ',' << matrix.months[m] << ','
                << (matrix.present[r][m] ? 1 : 0) << '\n';
}

void write_prevalence_csv(std::ostream& out, const std::string& month,
                          const PrevalenceStats& stats) {
    out << "month,typo_type,suspect,reference,collectors_with_typo,collectors_with_prefix,"
           "ratio_pct\n";
    for (const PrevalenceRow& row : stats.rows)
        out << month << ',' << static_cast<int>(row.key.type) << ',' << row.key.suspect << ','
            << row.key.reference << ',' << row.collectors_with_typo << ','
            << row.collectors_with_prefix << ',' << fixed(row.ratio() * 100.0) << '\n';
}

void write_prevalence_histogram_csv(std::ostream& out, const std::string& month,
                                    const PrevalenceStats& stats) {
    out << "month,typo_type,collectors,keys\n";
    for (int t = 1; t <= 4; ++t)
        for (const auto& [collectors, keys] : stats.histogram[t])
            out << month << ',' << t << ',' << collectors << ',' << keys << '\n';
}

void write_prevalence_cdf_csv(std::ostream& out, const std::string& month,
                              const PrevalenceStats& stats) {
    out << "month,typo_type,min_collector_pct,key_fraction\n";
    for (int t = 1; t <= 4; ++t)
        for (const auto& [pct, fraction] : stats.cdf[t])
            out << month << ',' << t << ',' << fixed(pct, 0) << ',' << fixed(fraction) << '\n';
}

void write_countries_csv(std::ostream& out, const CountryBreakdown& breakdown) {
    out << "country,offender_asns,registry_share_pct\n";
    for (const auto& [country, count] : breakdown.offenders) {
        auto it = breakdown.registry_share_pct.find(country);
        double share = it == breakdown.registry_share_pct.end() ? 0.0 : it->second;
        out << country << ',' << count << ',' << fixed(share, 2) << '\n';
    }
    // Baseline rows for countries with no offenders keep the comparison
    // complete.
    for (const auto& [country, share] : breakdown.registry_share_pct)
        if (breakdown.offenders.count(country) == 0)
            out << country << ",0," << fixed(share, 2) << '\n';
    if (breakdown.unregistered_offenders > 0)
        out << "??," << breakdown.unregistered_offenders << ",0.00\n";
}

void write_snapshot_canonical(std::ostream& out, const Snapshot& snapshot) {
    for (const RouteEntry& entry : snapshot.entries)
        out << entry.timestamp << '|' << entry.collector << '|' << entry.peer_asn.text << '|'
            << entry.prefix.to_string() << '|' << entry.path.to_string() << '\n';
}

void atomic_write_file(const std::filesystem::path& path,
                       const std::function<void(std::ostream&)>& writer) {
    namespace fs = std::filesystem;
    fs::path dir = path.parent_path();
    if (!dir.empty())
        fs::create_directories(dir);
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw IoError("cannot write: " + tmp.string());
        writer(out);
        out.flush();
        if (!out)
            throw IoError("write failure: " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw IoError("cannot move " + tmp.string() + " into place: " + ec.message());
    }
}

} // namespace bgptypo

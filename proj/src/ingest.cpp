#include "bgptypo/ingest.hpp"

#include "bgptypo/errors.hpp"

#include <charconv>
#include <ctime>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <utility>

namespace bgptypo {

namespace {

std::uint64_t parse_u64_field(std::string_view s, std::string_view what) {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || s.empty())
        throw ParseError("invalid " + std::string(what) + ": '" + std::string(s) + "'");
    return v;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        std::size_t next = line.find(sep, pos);
        if (next == std::string_view::npos) {
            out.push_back(line.substr(pos));
            break;
        }
        out.push_back(line.substr(pos, next - pos));
        pos = next + 1;
    }
    return out;
}

RouteEntry parse_canonical_line(std::string_view line) {
    auto fields = split(line, '|');
    if (fields.size() != 5)
        throw ParseError("expected 5 pipe-separated fields");
    RouteEntry entry;
    entry.timestamp = parse_u64_field(fields[0], "timestamp");
    if (fields[1].empty())
        throw ParseError("empty collector");
    entry.collector = std::string(fields[1]);
    entry.peer_asn = AsToken::parse(fields[2]);
    entry.prefix = Prefix::parse(fields[3]);
    entry.path = parse_path(fields[4]);
    return entry;
}

Snapshot read_canonical_text(std::istream& source, std::string_view label,
                             const LoadOptions& options, LoadStats* stats) {
    Snapshot snapshot;
    snapshot.label = std::string(label);

    LoadStats local;
    LoadStats& st = stats ? *stats : local;

    std::string line;
    while (std::getline(source, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        if (line[0] == '#') {
            ++st.comments;
            continue;
        }
        ++st.lines;
        try {
            RouteEntry entry = parse_canonical_line(line);
            if (entry.prefix.length == 0)
                ++st.default_route_entries;
            snapshot.collectors.insert(entry.collector);
            snapshot.entries.push_back(std::move(entry));
            ++st.parsed;
        } catch (const ParseError&) {
            ++st.skipped;
        }
    }
    if (source.bad())
        throw IoError("read failure while loading snapshot");

    if (st.skipped > options.error_floor &&
        static_cast<double>(st.skipped) >
            options.max_error_rate * static_cast<double>(st.lines)) {
        throw CorruptInputError("malformed-line budget exceeded: " + std::to_string(st.skipped) +
                                " of " + std::to_string(st.lines) + " lines unparseable");
    }
    if (st.parsed == 0)
        st.warnings.push_back("snapshot " + snapshot.label + " has no entries");
    if (st.default_route_entries > 0)
        st.warnings.push_back(std::to_string(st.default_route_entries) +
                              " default-route (/0) entries; counted as noise");
    return snapshot;
}

struct ReaderRegistry {
    std::mutex mutex;
    std::map<std::string, SnapshotReader> readers;

    ReaderRegistry() { readers.emplace("canonical-text", read_canonical_text); }
};

ReaderRegistry& registry() {
    static ReaderRegistry instance;
    return instance;
}

} // namespace

std::string month_label_from_timestamp(std::uint64_t seconds_since_epoch) {
    std::time_t t = static_cast<std::time_t>(seconds_since_epoch);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02d", tm.tm_year + 1900, tm.tm_mon + 1);
    return buf;
}

void register_snapshot_reader(std::string name, SnapshotReader reader) {
    auto& reg = registry();
    std::lock_guard lock(reg.mutex);
    reg.readers[std::move(name)] = std::move(reader);
}

std::vector<std::string> snapshot_formats() {
    auto& reg = registry();
    std::lock_guard lock(reg.mutex);
    std::vector<std::string> names;
    for (const auto& [name, _] : reg.readers)
        names.push_back(name);
    return names;
}

Snapshot load_snapshot(std::istream& source, std::string_view format, std::string_view label,
                       const LoadOptions& options, LoadStats* stats) {
    if (!valid_month_label(label))
        throw ParseError("snapshot label must be YYYY-MM, got '" + std::string(label) + "'");
    SnapshotReader reader;
    {
        auto& reg = registry();
        std::lock_guard lock(reg.mutex);
        auto it = reg.readers.find(std::string(format));
        if (it == reg.readers.end())
            throw ParseError("unknown snapshot format: '" + std::string(format) + "'");
        reader = it->second;
    }
    return reader(source, label, options, stats);
}

Snapshot load_snapshot_file(const std::filesystem::path& path, std::string_view format,
                            const LoadOptions& options, LoadStats* stats) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open snapshot file: " + path.string());

    std::string stem = path.stem().string();
    if (stem.size() >= 7 && valid_month_label(std::string_view(stem).substr(0, 7)))
        return load_snapshot(in, format, std::string_view(stem).substr(0, 7), options, stats);

    // No label in the file name; derive it from the data.
    Snapshot snapshot = load_snapshot(in, format, "0001-01", options, stats);
    if (snapshot.entries.empty())
        throw ParseError("cannot derive month label for " + path.string() +
                         ": empty snapshot and no YYYY-MM file-name prefix");
    snapshot.label = month_label_from_timestamp(snapshot.entries.front().timestamp);
    return snapshot;
}

namespace {

// Shared TSV walk: trims CRs, skips blank/# lines, reports line numbers.
void for_each_tsv_row(std::istream& in,
                      const std::function<void(std::size_t, std::vector<std::string_view>&)>& fn) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty() || line[0] == '#')
            continue;
        auto fields = split(line, '\t');
        try {
            fn(line_no, fields);
        } catch (const std::runtime_error& e) {
            throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (in.bad())
        throw IoError("read failure while loading database");
}

void require_fields(const std::vector<std::string_view>& fields, std::size_t n) {
    if (fields.size() != n)
        throw ParseError("expected " + std::to_string(n) + " tab-separated fields, got " +
                         std::to_string(fields.size()));
}

} // namespace

OwnershipDb load_ownership(std::istream& in) {
    OwnershipDb db;
    for_each_tsv_row(in, [&](std::size_t, std::vector<std::string_view>& f) {
        require_fields(f, 2);
        db.add(Prefix::parse(f[0]), parse_u64_field(f[1], "owner ASN"));
    });
    return db;
}

AsnRegistry load_registry(std::istream& in) {
    AsnRegistry reg;
    for_each_tsv_row(in, [&](std::size_t, std::vector<std::string_view>& f) {
        require_fields(f, 2);
        reg.add(parse_u64_field(f[0], "ASN"), f[1]);
    });
    return reg;
}

CountryAdjacency load_adjacency(std::istream& in) {
    CountryAdjacency adj;
    for_each_tsv_row(in, [&](std::size_t, std::vector<std::string_view>& f) {
        require_fields(f, 2);
        adj.add(f[0], f[1]);
    });
    return adj;
}

UpstreamWhitelist load_whitelist(std::istream& in, std::uint64_t small_asn_min,
                                 std::uint64_t small_asn_max) {
    UpstreamWhitelist wl;
    for_each_tsv_row(in, [&](std::size_t, std::vector<std::string_view>& f) {
        require_fields(f, 2);
        std::uint64_t small = parse_u64_field(f[0], "stub ASN");
        if (small < small_asn_min || small > small_asn_max)
            throw ParseError("stub ASN " + std::to_string(small) + " outside [" +
                             std::to_string(small_asn_min) + "," + std::to_string(small_asn_max) +
                             "]");
        wl.add(small, parse_u64_field(f[1], "upstream ASN"));
    });
    return wl;
}

namespace {

std::ifstream open_or_throw(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open file: " + path.string());
    return in;
}

} // namespace

OwnershipDb load_ownership_file(const std::filesystem::path& path) {
    auto in = open_or_throw(path);
    return load_ownership(in);
}

AsnRegistry load_registry_file(const std::filesystem::path& path) {
    auto in = open_or_throw(path);
    return load_registry(in);
}

CountryAdjacency load_adjacency_file(const std::filesystem::path& path) {
    auto in = open_or_throw(path);
    return load_adjacency(in);
}

UpstreamWhitelist load_whitelist_file(const std::filesystem::path& path,
                                      std::uint64_t small_asn_min, std::uint64_t small_asn_max) {
    auto in = open_or_throw(path);
    return load_whitelist(in, small_asn_min, small_asn_max);
}

} // namespace bgptypo

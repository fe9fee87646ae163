#pragma once

#include "bgptypo/databases.hpp"
#include "bgptypo/path_model.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace bgptypo {

struct LoadOptions {
    // Malformed lines are skipped, not fatal, until they exceed both the
    // absolute floor and the rate; tiny fixtures stay loadable while a
    // genuinely corrupt feed still fails fast.
    double max_error_rate = 0.01;
    std::size_t error_floor = 10;
};

struct LoadStats {
    std::size_t lines = 0;
    std::size_t parsed = 0;
    std::size_t skipped = 0;
    std::size_t comments = 0;
    std::size_t default_route_entries = 0; // /0 announcements, reported as noise
    std::vector<std::string> warnings;
};

/// Reads one monthly snapshot. `format` names a registered reader;
/// "canonical-text" is built in. Throws CorruptInputError when the
/// malformed-line budget is exceeded, ParseError for an unknown format or
/// bad label.
Snapshot load_snapshot(std::istream& source, std::string_view format, std::string_view label,
                       const LoadOptions& options = {}, LoadStats* stats = nullptr);

/// File variant; the label comes from a leading YYYY-MM in the file name,
/// falling back to the month of the first entry's timestamp.
Snapshot load_snapshot_file(const std::filesystem::path& path,
                            std::string_view format = "canonical-text",
                            const LoadOptions& options = {}, LoadStats* stats = nullptr);

using SnapshotReader = std::function<Snapshot(std::istream&, std::string_view label,
                                              const LoadOptions&, LoadStats*)>;

/// Plugs an alternative input format (e.g. an MRT reader) behind the same
/// load_snapshot contract.
void register_snapshot_reader(std::string name, SnapshotReader reader);
std::vector<std::string> snapshot_formats();

std::string month_label_from_timestamp(std::uint64_t seconds_since_epoch);

// Side databases, all tab-separated, one relation per row.
OwnershipDb load_ownership(std::istream& in);
AsnRegistry load_registry(std::istream& in);
CountryAdjacency load_adjacency(std::istream& in);
UpstreamWhitelist load_whitelist(std::istream& in, std::uint64_t small_asn_min = 1,
                                 std::uint64_t small_asn_max = 12);

OwnershipDb load_ownership_file(const std::filesystem::path& path);
AsnRegistry load_registry_file(const std::filesystem::path& path);
CountryAdjacency load_adjacency_file(const std::filesystem::path& path);
UpstreamWhitelist load_whitelist_file(const std::filesystem::path& path,
                                      std::uint64_t small_asn_min = 1,
                                      std::uint64_t small_asn_max = 12);

} // namespace bgptypo

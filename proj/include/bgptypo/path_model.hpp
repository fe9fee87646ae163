#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bgptypo {

/// One ASN as it was typed in an announcement.
///
/// The digit string is the primary representation: typo predicates compare
/// spellings, not values. `value` is the numeric parse and deliberately may
/// exceed the 32-bit ASN space (a missed space between two ASNs concatenates
/// their digits). Tokens too long for 64 bits saturate to the maximum, which
/// keeps every threshold comparison meaningful.
struct AsToken {
    std::string text;
    std::uint64_t value = 0;

    static AsToken parse(std::string_view digits); // throws ParseError

    bool is_assignable(std::uint64_t max_asn) const { return value <= max_asn; }

    friend bool operator==(const AsToken& a, const AsToken& b) { return a.text == b.text; }
    friend bool operator!=(const AsToken& a, const AsToken& b) { return !(a == b); }
};

/// An IPv4 address block. Host bits below `length` are always zero.
struct Prefix {
    std::uint32_t base = 0;
    int length = 0;

    static Prefix parse(std::string_view cidr); // throws ParseError
    static Prefix make(std::uint32_t base, int length);

    std::uint64_t address_count() const { return std::uint64_t{1} << (32 - length); }
    bool contains(const Prefix& other) const;
    std::string to_string() const;

    friend auto operator<=>(const Prefix&, const Prefix&) = default;
};

/// An ordered ASN sequence, leftmost nearest the collector peer, rightmost
/// the origin. AS_SET groups are not expanded; a path containing one is
/// flagged and excluded from scanning, but keeps its original spelling so it
/// can be written back untouched.
struct AsPath {
    std::vector<AsToken> tokens;
    bool contains_as_set = false;
    std::string as_set_text; // original spelling, only populated when flagged

    bool empty() const { return tokens.empty(); }
    std::size_t size() const { return tokens.size(); }
    const AsToken& origin() const { return tokens.back(); }

    std::string to_string() const;
};

struct RouteEntry {
    std::uint64_t timestamp = 0; // seconds since epoch
    std::string collector;
    AsToken peer_asn;
    Prefix prefix;
    AsPath path;
};

/// One month of RIB data.
struct Snapshot {
    std::string label; // YYYY-MM
    std::vector<RouteEntry> entries;
    std::set<std::string> collectors;
};

bool valid_month_label(std::string_view label);

/// Parses a whitespace-separated AS path. `{...}` groups flag the path as
/// containing an AS_SET; a trailing origin-protocol letter (i/e/?) is
/// dropped. Throws ParseError on empty input or stray non-digit tokens.
AsPath parse_path(std::string_view text);

struct Run {
    AsToken token;
    std::uint32_t count = 0;
};

/// Collapses maximal runs of identically-written adjacent tokens.
/// Throws UnsupportedPathError for AS_SET paths.
std::vector<Run> collapse_runs(const AsPath& path);

/// True when some ASN value occurs in two or more collapsed runs, i.e. the
/// path revisits an AS it already left.
bool has_loop(const AsPath& path);

/// Distinct IPv4 addresses covered by the union of the prefixes.
std::uint64_t address_count(std::span<const Prefix> prefixes);

/// Sum of per-prefix sizes, ignoring overlap. Comparison mode only.
std::uint64_t address_count_sum(std::span<const Prefix> prefixes);

} // namespace bgptypo

#pragma once

#include "bgptypo/path_model.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace bgptypo {

/// Prefix -> owner ASNs with longest-prefix-match lookup, backed by a
/// binary trie over address bits. Announced blocks are usually more
/// specific than their registry entry, so exact match would miss them.
class OwnershipDb {
public:
    void add(const Prefix& prefix, std::uint64_t asn);

    /// Owner set of the longest entry containing `prefix`, or nullptr.
    const std::set<std::uint64_t>* lookup(const Prefix& prefix) const;

    std::size_t size() const { return entry_count_; }

private:
    struct Node {
        std::int32_t child[2] = {-1, -1};
        std::int32_t owners = -1; // index into owner_sets_
    };
    std::int32_t ensure_child(std::int32_t node, int bit);

    std::vector<Node> nodes_{Node{}};
    std::vector<std::set<std::uint64_t>> owner_sets_;
    std::size_t entry_count_ = 0;
};

std::optional<std::set<std::uint64_t>> longest_prefix_owner(const OwnershipDb& db,
                                                            const Prefix& prefix);

/// ASN -> ISO-3166 alpha-2 registration country.
class AsnRegistry {
public:
    /// Throws DomainError when an ASN is re-registered to a different country.
    void add(std::uint64_t asn, std::string_view country);

    std::optional<std::string> country_of(std::uint64_t asn) const;
    bool contains(std::uint64_t asn) const { return countries_.count(asn) != 0; }
    std::size_t size() const { return countries_.size(); }

    /// Registered ASNs per country, for baseline shares.
    const std::map<std::string, std::size_t>& country_counts() const { return counts_; }

private:
    std::unordered_map<std::uint64_t, std::string> countries_;
    std::map<std::string, std::size_t> counts_;
};

bool valid_country_code(std::string_view code);

/// Unordered country pairs considered neighbors. A country is always
/// adjacent to itself.
class CountryAdjacency {
public:
    void add(std::string_view a, std::string_view b);
    bool adjacent(std::string_view a, std::string_view b) const;
    std::size_t size() const { return pairs_.size(); }

private:
    std::set<std::pair<std::string, std::string>> pairs_; // stored (min,max)
};

/// Legitimate upstream providers of the small stub ASNs that prepend-count
/// typos impersonate.
class UpstreamWhitelist {
public:
    void add(std::uint64_t small_asn, std::uint64_t upstream_asn);
    bool allows(std::uint64_t small_asn, std::uint64_t upstream_asn) const;
    const std::set<std::uint64_t>* upstreams_of(std::uint64_t small_asn) const;
    bool empty() const { return map_.empty(); }
    std::size_t size() const { return map_.size(); }

    const std::map<std::uint64_t, std::set<std::uint64_t>>& entries() const { return map_; }

private:
    std::map<std::uint64_t, std::set<std::uint64_t>> map_;
};

} // namespace bgptypo

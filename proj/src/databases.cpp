#include "bgptypo/databases.hpp"

#include "bgptypo/errors.hpp"

#include <algorithm>
#include <utility>

namespace bgptypo {

std::int32_t OwnershipDb::ensure_child(std::int32_t node, int bit) {
    if (nodes_[node].child[bit] < 0) {
        nodes_[node].child[bit] = static_cast<std::int32_t>(nodes_.size());
        nodes_.push_back(Node{});
    }
    return nodes_[node].child[bit];
}

void OwnershipDb::add(const Prefix& prefix, std::uint64_t asn) {
    std::int32_t node = 0;
    for (int depth = 0; depth < prefix.length; ++depth) {
        int bit = (prefix.base >> (31 - depth)) & 1;
        node = ensure_child(node, bit);
    }
    if (nodes_[node].owners < 0) {
        nodes_[node].owners = static_cast<std::int32_t>(owner_sets_.size());
        owner_sets_.emplace_back();
        ++entry_count_;
    }
    owner_sets_[nodes_[node].owners].insert(asn);
}

const std::set<std::uint64_t>* OwnershipDb::lookup(const Prefix& prefix) const {
    std::int32_t node = 0;
    std::int32_t best = nodes_[0].owners;
    for (int depth = 0; depth < prefix.length; ++depth) {
        int bit = (prefix.base >> (31 - depth)) & 1;
        node = nodes_[node].child[bit];
        if (node < 0)
            break;
        if (nodes_[node].owners >= 0)
            best = nodes_[node].owners;
    }
    return best >= 0 ? &owner_sets_[best] : nullptr;
}

std::optional<std::set<std::uint64_t>> longest_prefix_owner(const OwnershipDb& db,
                                                            const Prefix& prefix) {
    const auto* owners = db.lookup(prefix);
    if (!owners)
        return std::nullopt;
    return *owners;
}

bool valid_country_code(std::string_view code) {
    return code.size() == 2 && code[0] >= 'A' && code[0] <= 'Z' && code[1] >= 'A' &&
           code[1] <= 'Z';
}

void AsnRegistry::add(std::uint64_t asn, std::string_view country) {
    if (!valid_country_code(country))
        throw DomainError("invalid country code: '" + std::string(country) + "'");
    auto it = countries_.find(asn);
    if (it != countries_.end()) {
        if (it->second != country)
            throw DomainError("duplicate registry key for AS" + std::to_string(asn) + ": " +
                              it->second + " vs " + std::string(country));
        return;
    }
    countries_.emplace(asn, std::string(country));
    ++counts_[std::string(country)];
}

std::optional<std::string> AsnRegistry::country_of(std::uint64_t asn) const {
    auto it = countries_.find(asn);
    if (it == countries_.end())
        return std::nullopt;
    return it->second;
}

void CountryAdjacency::add(std::string_view a, std::string_view b) {
    if (!valid_country_code(a) || !valid_country_code(b))
        throw DomainError("invalid country pair: '" + std::string(a) + "' / '" + std::string(b) +
                          "'");
    std::string lo(a), hi(b);
    if (hi < lo)
        std::swap(lo, hi);
    pairs_.emplace(std::move(lo), std::move(hi));
}

bool CountryAdjacency::adjacent(std::string_view a, std::string_view b) const {
    if (a == b)
        return true;
    std::string lo(a), hi(b);
    if (hi < lo)
        std::swap(lo, hi);
    return pairs_.count({lo, hi}) != 0;
}

void UpstreamWhitelist::add(std::uint64_t small_asn, std::uint64_t upstream_asn) {
    map_[small_asn].insert(upstream_asn);
}

bool UpstreamWhitelist::allows(std::uint64_t small_asn, std::uint64_t upstream_asn) const {
    auto it = map_.find(small_asn);
    return it != map_.end() && it->second.count(upstream_asn) != 0;
}

const std::set<std::uint64_t>* UpstreamWhitelist::upstreams_of(std::uint64_t small_asn) const {
    auto it = map_.find(small_asn);
    return it == map_.end() ? nullptr : &it->second;
}

} // namespace bgptypo

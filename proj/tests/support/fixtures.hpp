#pragma once

// Shared test fixtures: a small RIB month whose routes carry one known typo
// each, plus the side databases that let every rule reach its verdict.

#include "bgptypo/classify.hpp"
#include "bgptypo/ingest.hpp"
#include "bgptypo/path_model.hpp"
#include "bgptypo/scan.hpp"

#include <sstream>
#include <string>
#include <vector>

namespace fixtures {

inline std::string rib_text() {
    return
        "# fixture month\n"
        "1483228800|rv1|3741|2.58.168.0/22|3741 9002 29278 29728 29278 29278 29278 29278 29278 42864\n"
        "1483228800|rv1|24441|81.88.208.0/20|24441 6939 20764 39709 39709 3970 39709 39709\n"
        "1483228800|rv1|3356|72.5.214.0/24|3356 32026 32026 32026 32026 32026 32026 3202632026 32026 32026 32026\n"
        "1483228800|rv1|18351|202.56.168.0/24|18351 131758 3\n"
        "1483228800|rv1|57463|103.49.56.0/24|57463 9498 133718 133718 2\n"
        "1483228800|rv1|7660|5.100.240.0/24|7660 2516 701 3356 42020 42020 42020 42020 42020 42020 31126 56902 56902 56902 3\n"
        "1483228800|rv1|3549|5.183.170.0/24|3549 3356 8708 213323 213323 213323 213323 213323 213323 213323 213323 8\n"
        "1483228800|rv1|293|143.208.148.0/24|293 6453 7738 8167 25933 25933 25933 264092 264092 26402 264092\n"
        "1483228800|rv1|1221|155.133.83.0/24|1221 4637 174 50607 62081 199250 199250 199250 19925 19925\n"
        "1483228800|rv1|37100|193.93.216.0/22|37100 37100 3255 49284 49824 49824 49824 49824 49824\n"
        "1483228800|rv1|53767|2.176.0.0/12|53767 3257 1299 12880 12880 12880 12880 2880 12880\n";
}

inline std::string ownership_text() {
    return "2.58.168.0/22\t42864\n"
           "81.88.208.0/20\t39709\n"
           "72.5.214.0/24\t32026\n"
           "202.56.168.0/24\t131758\n"
           "103.49.56.0/24\t133718\n"
           "5.100.240.0/24\t56902\n"
           "5.183.170.0/24\t213323\n"
           "143.208.148.0/24\t264092\n"
           "155.133.83.0/24\t199250\n"
           "193.93.216.0/22\t49824\n"
           "2.176.0.0/12\t12880\n";
}

inline std::string registry_text() {
    return "3255\tUA\n"
           "49284\tIT\n"
           "49824\tUA\n"
           "42864\tIT\n"
           "39709\tIT\n"
           "32026\tUS\n"
           "131758\tID\n"
           "133718\tVN\n"
           "56902\tIL\n"
           "213323\tGB\n"
           "264092\tBR\n"
           "199250\tPL\n"
           "12880\tIR\n";
}

inline std::string adjacency_text() {
    return "UA\tPL\n"
           "IT\tFR\n";
}

inline std::string whitelist_text() {
    return "1\t701\n"
           "2\t701\n"
           "3\t174\n"
           "8\t6939\n"
           "12\t3356\n";
}

inline bgptypo::Snapshot snapshot(bgptypo::LoadStats* stats = nullptr) {
    std::istringstream in(rib_text());
    return bgptypo::load_snapshot(in, "canonical-text", "2017-01", {}, stats);
}

inline bgptypo::OwnershipDb ownership() {
    std::istringstream in(ownership_text());
    return bgptypo::load_ownership(in);
}

inline bgptypo::AsnRegistry registry() {
    std::istringstream in(registry_text());
    return bgptypo::load_registry(in);
}

inline bgptypo::CountryAdjacency adjacency() {
    std::istringstream in(adjacency_text());
    return bgptypo::load_adjacency(in);
}

inline bgptypo::UpstreamWhitelist whitelist() {
    std::istringstream in(whitelist_text());
    return bgptypo::load_whitelist(in);
}

struct ExpectedTypo {
    std::string prefix;
    bgptypo::TypoType type;
    std::string suspect;
    std::string reference;
    bgptypo::Rule rule;
};

inline std::vector<ExpectedTypo> expected_typos() {
    using bgptypo::Rule;
    using bgptypo::TypoType;
    return {
        {"2.58.168.0/22", TypoType::SwapDigits, "29728", "29278", Rule::Loop},
        {"81.88.208.0/20", TypoType::InsertDelete, "3970", "39709", Rule::Loop},
        {"72.5.214.0/24", TypoType::MissingSpace, "3202632026", "32026", Rule::Loop},
        {"202.56.168.0/24", TypoType::PrependCount, "3", "131758", Rule::Origin},
        {"103.49.56.0/24", TypoType::PrependCount, "2", "133718", Rule::Origin},
        {"5.100.240.0/24", TypoType::PrependCount, "3", "56902", Rule::Origin},
        {"5.183.170.0/24", TypoType::PrependCount, "8", "213323", Rule::Origin},
        {"143.208.148.0/24", TypoType::InsertDelete, "26402", "264092", Rule::Loop},
        {"155.133.83.0/24", TypoType::InsertDelete, "19925", "199250", Rule::Origin},
        {"193.93.216.0/22", TypoType::SwapDigits, "49284", "49824", Rule::Geo},
        {"2.176.0.0/12", TypoType::InsertDelete, "2880", "12880", Rule::Loop},
    };
}

// A standalone route for predicate-level tests.
inline bgptypo::RouteEntry entry(const std::string& prefix, const std::string& path) {
    bgptypo::RouteEntry e;
    e.timestamp = 1483228800;
    e.collector = "rv1";
    e.peer_asn = bgptypo::AsToken::parse("64500");
    e.prefix = bgptypo::Prefix::parse(prefix);
    e.path = bgptypo::parse_path(path);
    return e;
}

inline bgptypo::Snapshot single_entry_snapshot(const std::string& prefix,
                                               const std::string& path) {
    bgptypo::Snapshot s;
    s.label = "2017-01";
    s.entries.push_back(entry(prefix, path));
    s.collectors.insert("rv1");
    return s;
}

} // namespace fixtures

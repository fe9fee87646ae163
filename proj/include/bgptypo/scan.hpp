#pragma once

#include "bgptypo/databases.hpp"
#include "bgptypo/path_model.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bgptypo {

enum class TypoType : int {
    PrependCount = 1, // the intended prepend amount typed as a path token
    SwapDigits = 2,
    InsertDelete = 3,
    MissingSpace = 4,
};

struct ScanConfig {
    std::uint64_t small_asn_min = 1;
    std::uint64_t small_asn_max = 12;
    std::uint64_t max_assigned_asn = 500'000;
    std::uint32_t min_run_for_type1 = 1; // shortest upstream run that still qualifies
};

/// A suspected (suspect, reference) ASN pair found in one route.
struct TypoCandidate {
    TypoType type = TypoType::SwapDigits;
    std::uint32_t entry_index = 0; // into Snapshot::entries
    std::uint32_t position = 0;    // suspect index in the path tokens
    AsToken suspect;
    AsToken reference; // the ASN the suspect appears to corrupt
    std::string note;
};

// Pairwise digit-string predicates. All symmetric; callers pass distinct
// strings (adjacent collapsed runs never repeat a spelling).

/// b is a with exactly one adjacent digit pair transposed.
bool swap_typo(std::string_view a, std::string_view b);

/// The shorter string is the longer with one digit removed.
bool ins_del_typo(std::string_view a, std::string_view b);

/// One string is the other concatenated with itself.
bool missing_space_typo(std::string_view a, std::string_view b);

/// Tests every adjacent pair of collapsed runs, most specific predicate
/// first (missing space, then swap, then insert/delete), and emits one
/// candidate per first match. The run of length 1 beside a longer run is
/// the suspect; ties go to the origin-ward token.
std::vector<TypoCandidate> scan_path_pairs(const RouteEntry& entry, const ScanConfig& cfg,
                                           std::uint32_t entry_index = 0);

/// A small-numbered origin behind an upstream that is not on its whitelist.
std::optional<TypoCandidate> scan_type1(const RouteEntry& entry, const UpstreamWhitelist& whitelist,
                                        const ScanConfig& cfg, std::uint32_t entry_index = 0);

/// Tokens whose value exceeds the assigned-ASN ceiling.
std::vector<TypoCandidate> scan_type4_overflow(const RouteEntry& entry, const ScanConfig& cfg,
                                               std::uint32_t entry_index = 0);

struct CandidateSet {
    struct Occurrence {
        std::uint32_t candidate = 0; // into candidates
        std::uint32_t entry = 0;     // into Snapshot::entries
        std::uint32_t position = 0;
    };

    // Deduplicated per (type, suspect, reference, prefix), sorted by that key.
    std::vector<TypoCandidate> candidates;
    // Every pre-dedup instance in entry order; prevalence and repair need
    // the per-collector multiplicity the dedup discards.
    std::vector<Occurrence> occurrences;

    std::array<std::size_t, 5> count_by_type{}; // indexed by int(TypoType)
    std::size_t skipped_as_set = 0;
    std::size_t entry_errors = 0;

    std::size_t total() const { return candidates.size(); }
};

/// Scans every AS_SET-free entry with all three extractors. Output is
/// deterministic for any worker count.
CandidateSet scan_snapshot(const Snapshot& snapshot, const UpstreamWhitelist& whitelist,
                           const ScanConfig& cfg, unsigned workers = 1);

/// Collects the upstreams of owner-verified small-ASN announcements across
/// the given months. Throws DomainError on an empty snapshot list.
UpstreamWhitelist build_upstream_whitelist(std::span<const Snapshot> snapshots,
                                           const OwnershipDb& ownership, const ScanConfig& cfg);

} // namespace bgptypo

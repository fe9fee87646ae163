#pragma once

#include "bgptypo/databases.hpp"
#include "bgptypo/path_model.hpp"
#include "bgptypo/scan.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

namespace bgptypo {

enum class Outcome { Typo, NotTypo, Unknown };
enum class Rule { Loop, Origin, Geo, Inactive, None };

std::string_view to_string(Outcome o);
std::string_view to_string(Rule r);

struct Verdict {
    Outcome outcome = Outcome::NotTypo;
    Rule rule = Rule::None;
    std::string detail;
};

struct ClassifyContext {
    const OwnershipDb* ownership = nullptr;
    const AsnRegistry* registry = nullptr;
    const CountryAdjacency* adjacency = nullptr;
    // ASNs originating at least one prefix in the snapshot under test.
    std::unordered_set<std::uint64_t> active_origins;
    bool enable_geo = true;
    bool enable_inactive = true;
};

std::unordered_set<std::uint64_t> collect_active_origins(const Snapshot& snapshot);

/// The suspect sits inside a broken prepend run and taking it out makes the
/// path loop-free.
std::optional<Verdict> rule_loop(const Snapshot& snapshot, const TypoCandidate& candidate);

/// The pair reaches the path's right end but the origin does not own the
/// announced block. Unknown when the ownership database has no entry.
std::optional<Verdict> rule_origin(const Snapshot& snapshot, const TypoCandidate& candidate,
                                   const ClassifyContext& ctx);

/// The suspect's registration country breaks an A-S-A sandwich across
/// non-neighboring countries. Abstains on missing registry data.
std::optional<Verdict> rule_geo(const Snapshot& snapshot, const TypoCandidate& candidate,
                                const ClassifyContext& ctx);

/// The suspect is unregistered and originates nothing.
std::optional<Verdict> rule_inactive(const Snapshot& snapshot, const TypoCandidate& candidate,
                                     const ClassifyContext& ctx);

/// Runs the rules in ladder order (loop, origin, geo, inactive); the first
/// Typo wins. Prepend-count candidates check ownership first, and fall back
/// to Unknown rather than NotTypo since their whitelist already ruled out
/// the legitimate upstreams.
Verdict classify(const Snapshot& snapshot, const TypoCandidate& candidate,
                 const ClassifyContext& ctx);

/// One verdict per candidate, index-aligned. Deterministic for any worker
/// count.
std::vector<Verdict> classify_all(const Snapshot& snapshot, const CandidateSet& candidates,
                                  const ClassifyContext& ctx, unsigned workers = 1);

/// Rewrites the typo out of the entry's path: prepend-count tokens are
/// stripped, corrupted spellings rejoin their run, concatenations split
/// back into two copies. Throws ContractViolation unless the verdict is
/// Typo.
RouteEntry repair(const RouteEntry& entry, const TypoCandidate& candidate, const Verdict& verdict);

struct CleanResult {
    Snapshot snapshot;
    std::size_t entries_changed = 0;
};

/// Applies repair to every occurrence of every Typo-verdict candidate,
/// preserving entry order.
CleanResult repair_snapshot(const Snapshot& snapshot, const CandidateSet& candidates,
                            std::span<const Verdict> verdicts);

} // namespace bgptypo

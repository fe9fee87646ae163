#include "bgptypo/scan.hpp"

#include "bgptypo/errors.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <numeric>
#include <thread>
#include <tuple>

namespace bgptypo {

bool swap_typo(std::string_view a, std::string_view b) {
    if (a.size() != b.size() || a == b)
        return false;
    std::size_t i = 0;
    while (i < a.size() && a[i] == b[i])
        ++i;
    if (i + 1 >= a.size())
        return false;
    if (a[i] != b[i + 1] || a[i + 1] != b[i])
        return false;
    return a.substr(i + 2) == b.substr(i + 2);
}

bool ins_del_typo(std::string_view a, std::string_view b) {
    if (a.size() == b.size())
        return false;
    std::string_view shorter = a.size() < b.size() ? a : b;
    std::string_view longer = a.size() < b.size() ? b : a;
    if (longer.size() != shorter.size() + 1)
        return false;
    std::size_t i = 0;
    while (i < shorter.size() && shorter[i] == longer[i])
        ++i;
    return shorter.substr(i) == longer.substr(i + 1);
}

bool missing_space_typo(std::string_view a, std::string_view b) {
    auto doubled = [](std::string_view whole, std::string_view half) {
        return whole.size() == 2 * half.size() && whole.substr(0, half.size()) == half &&
               whole.substr(half.size()) == half;
    };
    return doubled(a, b) || doubled(b, a);
}

namespace {

struct IndexedRun {
    AsToken token;
    std::uint32_t count = 0;
    std::uint32_t start = 0; // first token index in the path
};

std::vector<IndexedRun> indexed_runs(const AsPath& path) {
    std::vector<IndexedRun> runs;
    for (std::uint32_t i = 0; i < path.tokens.size(); ++i) {
        const AsToken& tok = path.tokens[i];
        if (!runs.empty() && runs.back().token.text == tok.text)
            ++runs.back().count;
        else
            runs.push_back(IndexedRun{tok, 1, i});
    }
    return runs;
}

std::optional<TypoType> match_pair(std::string_view a, std::string_view b) {
    if (missing_space_typo(a, b))
        return TypoType::MissingSpace;
    if (swap_typo(a, b))
        return TypoType::SwapDigits;
    if (ins_del_typo(a, b))
        return TypoType::InsertDelete;
    return std::nullopt;
}

} // namespace

std::vector<TypoCandidate> scan_path_pairs(const RouteEntry& entry, const ScanConfig&,
                                           std::uint32_t entry_index) {
    if (entry.path.contains_as_set)
        throw UnsupportedPathError("cannot scan a path containing an AS_SET");

    std::vector<TypoCandidate> out;
    auto runs = indexed_runs(entry.path);
    for (std::size_t i = 0; i + 1 < runs.size(); ++i) {
        const IndexedRun& left = runs[i];
        const IndexedRun& right = runs[i + 1];
        auto type = match_pair(left.token.text, right.token.text);
        if (!type)
            continue;

        // The lone token beside a longer run interrupted it; with no run to
        // blame, suspect the origin-ward side.
        const IndexedRun* suspect = &right;
        const IndexedRun* reference = &left;
        if (left.count == 1 && right.count > 1) {
            suspect = &left;
            reference = &right;
        }

        bool duplicate = std::any_of(out.begin(), out.end(), [&](const TypoCandidate& c) {
            return c.suspect.text == suspect->token.text &&
                   c.reference.text == reference->token.text;
        });
        if (duplicate)
            continue;
        out.push_back(TypoCandidate{*type, entry_index, suspect->start, suspect->token,
                                    reference->token, {}});
    }
    return out;
}

std::optional<TypoCandidate> scan_type1(const RouteEntry& entry, const UpstreamWhitelist& whitelist,
                                        const ScanConfig& cfg, std::uint32_t entry_index) {
    if (entry.path.contains_as_set || entry.path.size() < 2)
        return std::nullopt;
    auto runs = indexed_runs(entry.path);
    if (runs.size() < 2)
        return std::nullopt;

    const IndexedRun& origin = runs.back();
    if (origin.token.value < cfg.small_asn_min || origin.token.value > cfg.small_asn_max)
        return std::nullopt;
    const IndexedRun& upstream = runs[runs.size() - 2];
    if (upstream.count < cfg.min_run_for_type1)
        return std::nullopt;
    if (whitelist.allows(origin.token.value, upstream.token.value))
        return std::nullopt;

    // The written count sometimes mirrors the repetitions already present;
    // worth surfacing, but not required for the match.
    std::string note = origin.token.value == upstream.count
                           ? "count matches upstream run length"
                           : "count " + origin.token.text + " vs run length " +
                                 std::to_string(upstream.count);
    return TypoCandidate{TypoType::PrependCount, entry_index, origin.start,
                         origin.token,           upstream.token, std::move(note)};
}

std::vector<TypoCandidate> scan_type4_overflow(const RouteEntry& entry, const ScanConfig& cfg,
                                               std::uint32_t entry_index) {
    std::vector<TypoCandidate> out;
    if (entry.path.contains_as_set)
        return out;
    auto runs = indexed_runs(entry.path);
    for (std::size_t i = 0; i < runs.size(); ++i) {
        if (runs[i].token.value <= cfg.max_assigned_asn)
            continue;
        const AsToken& suspect = runs[i].token;
        const IndexedRun* left = i > 0 ? &runs[i - 1] : nullptr;
        const IndexedRun* right = i + 1 < runs.size() ? &runs[i + 1] : nullptr;

        const IndexedRun* reference = nullptr;
        if (left && missing_space_typo(suspect.text, left->token.text))
            reference = left;
        else if (right && missing_space_typo(suspect.text, right->token.text))
            reference = right;
        else if (left)
            reference = left;
        else if (right)
            reference = right;
        if (!reference)
            continue; // single-token path; nothing to pair against
        out.push_back(TypoCandidate{TypoType::MissingSpace, entry_index, runs[i].start, suspect,
                                    reference->token, {}});
    }
    return out;
}

namespace {

using DedupKey = std::tuple<int, std::string, std::string, std::uint32_t, int>;

DedupKey dedup_key(const Snapshot& snapshot, const TypoCandidate& c) {
    const Prefix& p = snapshot.entries[c.entry_index].prefix;
    return {static_cast<int>(c.type), c.suspect.text, c.reference.text, p.base, p.length};
}

} // namespace

CandidateSet scan_snapshot(const Snapshot& snapshot, const UpstreamWhitelist& whitelist,
                           const ScanConfig& cfg, unsigned workers) {
    const std::size_t n = snapshot.entries.size();
    std::vector<std::vector<TypoCandidate>> per_entry(n);
    std::atomic<std::size_t> skipped_as_set{0};
    std::atomic<std::size_t> entry_errors{0};

    auto scan_range = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            const RouteEntry& entry = snapshot.entries[i];
            if (entry.path.contains_as_set) {
                ++skipped_as_set;
                continue;
            }
            if (entry.path.empty())
                continue;
            try {
                auto& out = per_entry[i];
                auto idx = static_cast<std::uint32_t>(i);
                if (auto t1 = scan_type1(entry, whitelist, cfg, idx))
                    out.push_back(std::move(*t1));
                for (auto& c : scan_path_pairs(entry, cfg, idx))
                    out.push_back(std::move(c));
                for (auto& c : scan_type4_overflow(entry, cfg, idx))
                    out.push_back(std::move(c));
            } catch (const std::exception&) {
                ++entry_errors;
            }
        }
    };

    workers = std::max(1u, workers);
    if (workers == 1 || n < 2 * workers) {
        scan_range(0, n);
    } else {
        std::vector<std::thread> threads;
        std::size_t chunk = (n + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            std::size_t lo = std::min(n, w * chunk);
            std::size_t hi = std::min(n, lo + chunk);
            if (lo < hi)
                threads.emplace_back(scan_range, lo, hi);
        }
        for (auto& t : threads)
            t.join();
    }

    // Merge in entry order: the first instance of a key becomes the
    // representative, which keeps results independent of the worker count.
    CandidateSet set;
    set.skipped_as_set = skipped_as_set.load();
    set.entry_errors = entry_errors.load();
    std::map<DedupKey, std::uint32_t> index;
    for (std::size_t i = 0; i < n; ++i) {
        for (TypoCandidate& cand : per_entry[i]) {
            DedupKey key = dedup_key(snapshot, cand);
            auto [it, inserted] =
                index.emplace(std::move(key), static_cast<std::uint32_t>(set.candidates.size()));
            std::uint32_t ci = it->second;
            set.occurrences.push_back(
                CandidateSet::Occurrence{ci, cand.entry_index, cand.position});
            if (inserted)
                set.candidates.push_back(std::move(cand));
        }
    }

    // Sort representatives by dedup key and remap occurrences.
    std::vector<std::uint32_t> order(set.candidates.size());
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        return dedup_key(snapshot, set.candidates[a]) < dedup_key(snapshot, set.candidates[b]);
    });
    std::vector<std::uint32_t> rank(order.size());
    for (std::uint32_t pos = 0; pos < order.size(); ++pos)
        rank[order[pos]] = pos;
    std::vector<TypoCandidate> sorted;
    sorted.reserve(set.candidates.size());
    for (std::uint32_t idx : order)
        sorted.push_back(std::move(set.candidates[idx]));
    set.candidates = std::move(sorted);
    for (auto& occ : set.occurrences)
        occ.candidate = rank[occ.candidate];

    for (const TypoCandidate& c : set.candidates)
        ++set.count_by_type[static_cast<int>(c.type)];
    return set;
}

UpstreamWhitelist build_upstream_whitelist(std::span<const Snapshot> snapshots,
                                           const OwnershipDb& ownership, const ScanConfig& cfg) {
    if (snapshots.empty())
        throw DomainError("whitelist construction needs at least one snapshot");
    UpstreamWhitelist wl;
    for (const Snapshot& snapshot : snapshots) {
        for (const RouteEntry& entry : snapshot.entries) {
            if (entry.path.contains_as_set || entry.path.size() < 2)
                continue;
            auto runs = indexed_runs(entry.path);
            if (runs.size() < 2)
                continue;
            std::uint64_t origin = runs.back().token.value;
            if (origin < cfg.small_asn_min || origin > cfg.small_asn_max)
                continue;
            const auto* owners = ownership.lookup(entry.prefix);
            if (!owners || owners->count(origin) == 0)
                continue; // not provably the block's owner; do not learn from it
            wl.add(origin, runs[runs.size() - 2].token.value);
        }
    }
    return wl;
}

} // namespace bgptypo

#include "bgptypo/classify.hpp"

#include "bgptypo/errors.hpp"

#include <algorithm>
#include <thread>

namespace bgptypo {

std::string_view to_string(Outcome o) {
    switch (o) {
    case Outcome::Typo:
        return "typo";
    case Outcome::NotTypo:
        return "not-typo";
    case Outcome::Unknown:
        return "unknown";
    }
    return "?";
}

std::string_view to_string(Rule r) {
    switch (r) {
    case Rule::Loop:
        return "loop";
    case Rule::Origin:
        return "origin";
    case Rule::Geo:
        return "geo";
    case Rule::Inactive:
        return "inactive";
    case Rule::None:
        return "none";
    }
    return "?";
}

std::unordered_set<std::uint64_t> collect_active_origins(const Snapshot& snapshot) {
    std::unordered_set<std::uint64_t> origins;
    for (const RouteEntry& entry : snapshot.entries) {
        if (entry.path.contains_as_set || entry.path.empty())
            continue;
        origins.insert(entry.path.origin().value);
    }
    return origins;
}

namespace {

struct RunView {
    std::vector<Run> runs;
    std::size_t suspect_run = 0; // run containing the candidate position
};

std::optional<RunView> runs_around(const RouteEntry& entry, const TypoCandidate& candidate) {
    if (entry.path.contains_as_set)
        return std::nullopt;
    RunView view;
    view.runs = collapse_runs(entry.path);
    std::uint32_t index = 0;
    for (std::size_t r = 0; r < view.runs.size(); ++r) {
        std::uint32_t end = index + view.runs[r].count;
        if (candidate.position >= index && candidate.position < end) {
            view.suspect_run = r;
            return view;
        }
        index = end;
    }
    return std::nullopt; // stale position
}

AsPath without_run(const AsPath& path, const std::vector<Run>& runs, std::size_t drop) {
    AsPath out;
    for (std::size_t r = 0; r < runs.size(); ++r) {
        if (r == drop)
            continue;
        for (std::uint32_t k = 0; k < runs[r].count; ++k)
            out.tokens.push_back(runs[r].token);
    }
    return out;
}

} // namespace

std::optional<Verdict> rule_loop(const Snapshot& snapshot, const TypoCandidate& candidate) {
    const RouteEntry& entry = snapshot.entries[candidate.entry_index];
    if (entry.path.contains_as_set || !has_loop(entry.path))
        return std::nullopt;
    auto view = runs_around(entry, candidate);
    if (!view)
        return std::nullopt;

    const auto& runs = view->runs;
    std::size_t r = view->suspect_run;
    const Run* left = r > 0 ? &runs[r - 1] : nullptr;
    const Run* right = r + 1 < runs.size() ? &runs[r + 1] : nullptr;

    bool attributable = false;
    if (left && right) {
        // The suspect must have split a genuine prepend run; a value merely
        // recurring around it is a pre-existing path property.
        attributable = left->token.value == right->token.value &&
                       (left->count >= 2 || right->count >= 2);
    } else {
        // Edge of the path: the suspect itself must be the recurring value.
        std::size_t recurrences = 0;
        for (const Run& run : runs)
            if (run.token.value == candidate.suspect.value)
                ++recurrences;
        attributable = recurrences >= 2;
    }
    if (!attributable)
        return std::nullopt;
    if (has_loop(without_run(entry.path, runs, r)))
        return std::nullopt; // loop survives without the suspect

    return Verdict{Outcome::Typo, Rule::Loop,
                   "path loops through AS" +
                       (left && right ? left->token.text : candidate.suspect.text) +
                       " and straightens once " + candidate.suspect.text + " is removed"};
}

namespace {

// The pair reaches the origin when the suspect's run, or the adjacent
// reference run, is the last run of the path.
bool pair_touches_origin(const std::vector<Run>& runs, std::size_t suspect_run,
                         const TypoCandidate& candidate) {
    if (suspect_run + 1 == runs.size())
        return true;
    if (suspect_run + 2 == runs.size() &&
        runs[suspect_run + 1].token.text == candidate.reference.text)
        return true;
    return false;
}

} // namespace

std::optional<Verdict> rule_origin(const Snapshot& snapshot, const TypoCandidate& candidate,
                                   const ClassifyContext& ctx) {
    if (!ctx.ownership)
        return std::nullopt;
    const RouteEntry& entry = snapshot.entries[candidate.entry_index];
    auto view = runs_around(entry, candidate);
    if (!view || !pair_touches_origin(view->runs, view->suspect_run, candidate))
        return std::nullopt;

    const auto* owners = ctx.ownership->lookup(entry.prefix);
    if (!owners)
        return Verdict{Outcome::Unknown, Rule::None,
                       "no ownership data for " + entry.prefix.to_string()};
    std::uint64_t origin = entry.path.origin().value;
    if (owners->count(origin) != 0)
        return std::nullopt;
    return Verdict{Outcome::Typo, Rule::Origin,
                   "origin AS" + entry.path.origin().text + " does not own " +
                       entry.prefix.to_string()};
}

std::optional<Verdict> rule_geo(const Snapshot& snapshot, const TypoCandidate& candidate,
                                const ClassifyContext& ctx) {
    if (!ctx.enable_geo || !ctx.registry || !ctx.adjacency)
        return std::nullopt;
    const RouteEntry& entry = snapshot.entries[candidate.entry_index];
    auto view = runs_around(entry, candidate);
    if (!view)
        return std::nullopt;
    std::size_t r = view->suspect_run;
    if (r == 0 || r + 1 >= view->runs.size())
        return std::nullopt;

    auto left = ctx.registry->country_of(view->runs[r - 1].token.value);
    auto mid = ctx.registry->country_of(candidate.suspect.value);
    auto right = ctx.registry->country_of(view->runs[r + 1].token.value);
    if (!left || !mid || !right)
        return std::nullopt; // sparse registry: abstain rather than guess
    if (*left != *right || *mid == *left)
        return std::nullopt;
    if (ctx.adjacency->adjacent(*left, *mid))
        return std::nullopt;
    return Verdict{Outcome::Typo, Rule::Geo,
                   "country sandwich " + *left + "-" + *mid + "-" + *right + " with " + *left +
                       " and " + *mid + " non-neighboring"};
}

std::optional<Verdict> rule_inactive(const Snapshot& snapshot, const TypoCandidate& candidate,
                                     const ClassifyContext& ctx) {
    if (!ctx.enable_inactive || !ctx.registry)
        return std::nullopt;
    std::uint64_t suspect = candidate.suspect.value;
    if (ctx.active_origins.count(suspect) != 0)
        return std::nullopt;
    if (ctx.registry->contains(suspect))
        return std::nullopt; // registered transit ASes legitimately originate nothing
    (void)snapshot;
    return Verdict{Outcome::Typo, Rule::Inactive,
                   "AS" + candidate.suspect.text + " is unregistered and originates no prefix"};
}

Verdict classify(const Snapshot& snapshot, const TypoCandidate& candidate,
                 const ClassifyContext& ctx) {
    std::optional<Verdict> origin_unknown;
    auto try_origin = [&]() -> std::optional<Verdict> {
        auto v = rule_origin(snapshot, candidate, ctx);
        if (v && v->outcome == Outcome::Typo)
            return v;
        if (v && v->outcome == Outcome::Unknown)
            origin_unknown = std::move(v);
        return std::nullopt;
    };

    const bool prepend_count = candidate.type == TypoType::PrependCount;
    std::optional<Verdict> hit;
    if (prepend_count) {
        hit = try_origin();
        if (!hit)
            hit = rule_loop(snapshot, candidate);
    } else {
        hit = rule_loop(snapshot, candidate);
        if (!hit)
            hit = try_origin();
    }
    if (!hit)
        hit = rule_geo(snapshot, candidate, ctx);
    if (!hit)
        hit = rule_inactive(snapshot, candidate, ctx);
    if (hit)
        return *hit;
    if (origin_unknown)
        return *origin_unknown;
    if (prepend_count)
        return Verdict{Outcome::Unknown, Rule::None,
                       "upstream AS" + candidate.reference.text + " not whitelisted for AS" +
                           candidate.suspect.text + " and no rule confirmed it"};
    return Verdict{Outcome::NotTypo, Rule::None, {}};
}

std::vector<Verdict> classify_all(const Snapshot& snapshot, const CandidateSet& candidates,
                                  const ClassifyContext& ctx, unsigned workers) {
    const std::size_t n = candidates.candidates.size();
    std::vector<Verdict> verdicts(n);
    auto classify_range = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i)
            verdicts[i] = classify(snapshot, candidates.candidates[i], ctx);
    };
    workers = std::max(1u, workers);
    if (workers == 1 || n < 2 * workers) {
        classify_range(0, n);
    } else {
        std::vector<std::thread> threads;
        std::size_t chunk = (n + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            std::size_t lo = std::min(n, w * chunk);
            std::size_t hi = std::min(n, lo + chunk);
            if (lo < hi)
                threads.emplace_back(classify_range, lo, hi);
        }
        for (auto& t : threads)
            t.join();
    }
    return verdicts;
}

namespace {

// Bounds of the run containing `position`.
std::pair<std::uint32_t, std::uint32_t> run_bounds(const AsPath& path, std::uint32_t position) {
    std::uint32_t lo = position;
    std::uint32_t hi = position + 1;
    const std::string& text = path.tokens[position].text;
    while (lo > 0 && path.tokens[lo - 1].text == text)
        --lo;
    while (hi < path.tokens.size() && path.tokens[hi].text == text)
        ++hi;
    return {lo, hi};
}

} // namespace

RouteEntry repair(const RouteEntry& entry, const TypoCandidate& candidate,
                  const Verdict& verdict) {
    if (verdict.outcome != Outcome::Typo)
        throw ContractViolation("repair requires a typo verdict");
    if (candidate.position >= entry.path.tokens.size() ||
        entry.path.tokens[candidate.position].text != candidate.suspect.text)
        throw ContractViolation("candidate position does not match the entry's path");

    RouteEntry fixed = entry;
    auto& tokens = fixed.path.tokens;
    auto [lo, hi] = run_bounds(entry.path, candidate.position);

    switch (candidate.type) {
    case TypoType::PrependCount:
        // Drop the trailing count; the former upstream becomes the origin.
        tokens.erase(tokens.begin() + lo, tokens.end());
        break;
    case TypoType::SwapDigits:
    case TypoType::InsertDelete:
        for (std::uint32_t i = lo; i < hi; ++i)
            tokens[i] = candidate.reference;
        break;
    case TypoType::MissingSpace: {
        std::vector<AsToken> replacement;
        if (missing_space_typo(candidate.suspect.text, candidate.reference.text)) {
            for (std::uint32_t i = lo; i < hi; ++i) {
                replacement.push_back(candidate.reference);
                replacement.push_back(candidate.reference);
            }
        }
        // A giant token that is not an exact doubling has no recoverable
        // spelling; dropping it is the only safe rewrite.
        tokens.erase(tokens.begin() + lo, tokens.begin() + hi);
        tokens.insert(tokens.begin() + lo, replacement.begin(), replacement.end());
        break;
    }
    }
    return fixed;
}

CleanResult repair_snapshot(const Snapshot& snapshot, const CandidateSet& candidates,
                            std::span<const Verdict> verdicts) {
    CleanResult result;
    result.snapshot.label = snapshot.label;
    result.snapshot.collectors = snapshot.collectors;

    // Typo occurrences per entry, repaired right to left so earlier
    // positions stay valid while the tail changes length.
    std::vector<std::vector<CandidateSet::Occurrence>> by_entry(snapshot.entries.size());
    for (const auto& occ : candidates.occurrences) {
        if (verdicts[occ.candidate].outcome == Outcome::Typo)
            by_entry[occ.entry].push_back(occ);
    }

    result.snapshot.entries.reserve(snapshot.entries.size());
    for (std::size_t i = 0; i < snapshot.entries.size(); ++i) {
        RouteEntry entry = snapshot.entries[i];
        auto& occs = by_entry[i];
        std::size_t applied = 0;
        std::sort(occs.begin(), occs.end(),
                  [](const auto& a, const auto& b) { return a.position > b.position; });
        for (const auto& occ : occs) {
            TypoCandidate positioned = candidates.candidates[occ.candidate];
            positioned.entry_index = static_cast<std::uint32_t>(i);
            positioned.position = occ.position;
            // Two candidates can claim the same tokens; whichever repair
            // ran first wins and the stale occurrence is skipped.
            if (occ.position >= entry.path.tokens.size() ||
                entry.path.tokens[occ.position].text != positioned.suspect.text)
                continue;
            entry = repair(entry, positioned, verdicts[occ.candidate]);
            ++applied;
        }
        if (applied > 0)
            ++result.entries_changed;
        result.snapshot.entries.push_back(std::move(entry));
    }
    return result;
}

} // namespace bgptypo

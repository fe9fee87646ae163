#pragma once

#include "bgptypo/classify.hpp"
#include "bgptypo/longitudinal.hpp"
#include "bgptypo/path_model.hpp"
#include "bgptypo/scan.hpp"

#include <filesystem>
#include <functional>
#include <ostream>
#include <span>
#include <string>

namespace bgptypo {

void write_candidates_csv(std::ostream& out, const Snapshot& snapshot,
                          const CandidateSet& candidates);
void write_verdicts_csv(std::ostream& out, const Snapshot& snapshot,
                        const CandidateSet& candidates, std::span<const Verdict> verdicts);
void write_metrics_csv(std::ostream& out, std::span<const MonthlyMetrics> metrics);
void write_retention_csv(std::ostream& out, std::span<const RetentionPoint> series);
void write_persistence_csv(std::ostream& out, const PersistenceMatrix& matrix);
void write_prevalence_csv(std::ostream& out, const std::string& month,
                          const PrevalenceStats& stats);
void write_prevalence_histogram_csv(std::ostream& out, const std::string& month,
                                    const PrevalenceStats& stats);
void write_prevalence_cdf_csv(std::ostream& out, const std::string& month,
                              const PrevalenceStats& stats);
void write_countries_csv(std::ostream& out, const CountryBreakdown& breakdown);

/// Canonical RIB text, one `timestamp|collector|peer|prefix|path` line per
/// entry, input order preserved.
void write_snapshot_canonical(std::ostream& out, const Snapshot& snapshot);

/// Writes via a temp file in the target directory and renames into place,
/// so readers never observe a half-written file.
void atomic_write_file(const std::filesystem::path& path,
                       const std::function<void(std::ostream&)>& writer);

} // namespace bgptypo

#pragma once

/**
 * @file formats.hpp
 * @brief Plain-text interchange formats.
 *
 *  - Candidate CSV: header `rho,theta,prob,d_rho,d_theta`, one row per
 *    candidate, LF line endings.
 *  - Score report CSV: header `combo_id,mask_bits,score,rank`; mask bits
 *    are written most-significant line first (line 1 is the LSB of the
 *    id); scores carry 6 decimals; rows sorted by rank.
 *  - Retrieval index: one record per line,
 *    `identifier<TAB>score<TAB>v1,v2,...,vd`.
 */

#include <string>
#include <vector>

#include "slcd/applications.hpp"
#include "slcd/candidates.hpp"
#include "slcd/scoring.hpp"

namespace slcd {

void save_candidates(const CandidateSet& candidates, const std::string& path);
CandidateSet load_candidates(const std::string& path);

void save_score_report(const ScoreReport& report, const std::string& path);

void save_retrieval_index(const std::vector<RetrievalEntry>& entries,
                          const std::string& path);
std::vector<RetrievalEntry> load_retrieval_index(const std::string& path);

/// Appends one entry to an index file (creates the file when missing).
void append_retrieval_entry(const RetrievalEntry& entry,
                            const std::string& path);

}  // namespace slcd

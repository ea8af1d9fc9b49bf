#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "zsspec/audit.hpp"
#include "zsspec/band_structure.hpp"
#include "zsspec/comb.hpp"

namespace zsspec {

/// Column order of the spectral summary CSV (frozen for schema version 1).
const std::vector<std::string>& summary_columns();

void write_summary_csv(std::ostream& os, const SpectralSummary& s);
std::string summary_json(const SpectralSummary& s, const std::string& source);

/// Per-gap comb data (label, g, h, A, J, masses, Y maxima) as CSV.
void write_sequences_csv(std::ostream& os, const SequenceData& d);

void write_audit_csv(std::ostream& os, const AuditReport& r);
std::string audit_json(const AuditReport& r);

/// Two-column (x, v) profile.
void write_profile_csv(std::ostream& os, const std::vector<double>& x, const std::vector<double>& v);

/// Writes `content` to `path`, creating parent directories. Throws Error on I/O failure.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace zsspec

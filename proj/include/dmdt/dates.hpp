#pragma once

#include <string>

namespace dmdt {

/// True iff `s` is a calendar-valid ISO-8601 date (YYYY-MM-DD).
bool is_iso_date(const std::string& s);

/// Days since 1970-01-01 for an ISO date. Throws ValidationError on bad input.
long iso_to_days(const std::string& iso);

/// Inverse of iso_to_days.
std::string days_to_iso(long days);

/// ISO date shifted by `delta` calendar days.
std::string iso_add_days(const std::string& iso, long delta);

}  // namespace dmdt

#pragma once

// dB/dBm helpers for the configuration boundary.  Everything past that
// boundary works in linear watts and linear gain ratios.

#include <cmath>

namespace cwpcn {

inline double dbm_to_watts(double dbm) { return std::pow(10.0, dbm / 10.0) * 1e-3; }

inline double watts_to_dbm(double w) { return 10.0 * std::log10(w * 1e3); }

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace cwpcn

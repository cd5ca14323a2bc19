#pragma once

#include <string>

#include "json.hpp"

#include "crnldp/certificates.hpp"

namespace crnldp {

inline constexpr int kSchemaVersion = 1;

/// Stable JSON rendering of a certificate report. Siphon and reachability
/// entries use species names; rational witnesses are rendered as exact
/// fraction strings.
nlohmann::json report_to_json(const Network& net, const CertificateReport& report);

}  // namespace crnldp

#pragma once

#include <optional>
#include <vector>

#include "crnldp/faces.hpp"
#include "crnldp/network.hpp"

namespace crnldp {

struct TooManySpecies : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct SiphonOptions {
    std::size_t max_species = 20;
};

/// Inclusion-minimal siphons, each a sorted species-index set. An empty list
/// means the network is asiphonic.
std::vector<std::vector<std::size_t>> find_siphons(const Network& net,
                                                   const SiphonOptions& opts = {});

/// Witness data for a failed endotacticity check: the exposed face of the
/// input complexes, the offending direction, and (for an outward reaction)
/// the reaction index.
struct EndotacticViolation {
    std::vector<std::size_t> face_members;       // indices into the distinct input complexes
    std::vector<Rational> witness_w;
    std::optional<std::size_t> reaction;         // set when an outward reaction exists
};

struct EndotacticVerdict {
    bool value = false;
    std::optional<EndotacticViolation> violation;
};

EndotacticVerdict is_strongly_endotactic(const Network& net);

enum class PVerdict { True, False, NotApplicable };

struct PEndotacticResult {
    PVerdict verdict = PVerdict::NotApplicable;
    std::optional<EndotacticViolation> violation;  // witness in the projected coordinates
};

/// Def.-6 check restricted to reactions with inputs supported inside P.
/// Reactions producing species outside P count as dissipative for every w.
PEndotacticResult is_strongly_P_endotactic(const Network& net,
                                           const std::vector<std::size_t>& P);

struct ConicHullResult {
    bool full = false;
    std::vector<Rational> witness;  // separating direction when not full
};

/// Whether the conic hull of the reaction vectors is all of R^d.
ConicHullResult conic_hull_full(const Network& net);

struct ReachabilityResult {
    bool success = false;
    std::vector<std::vector<std::size_t>> shells;               // the increments dS_k
    std::vector<std::vector<std::size_t>> realizing_reactions;  // one list per shell
    std::vector<std::size_t> unreached;
};

/// Iterates the species shells reachable from the empty state.
ReachabilityResult reachability_chain(const Network& net);

struct CertificateReport {
    EndotacticVerdict strongly_endotactic;
    std::vector<std::vector<std::size_t>> minimal_siphons;
    bool asiphonic = false;
    ConicHullResult conic_hull;
    ReachabilityResult reachability;
    bool ase = false;
};

CertificateReport full_report(const Network& net);

}  // namespace crnldp

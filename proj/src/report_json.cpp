#include "crnldp/report_json.hpp"

namespace crnldp {

namespace {

using nlohmann::json;

json names_of(const Network& net, const std::vector<std::size_t>& indices) {
    json out = json::array();
    for (auto i : indices) out.push_back(net.species_name(i));
    return out;
}

json rational_strings(const std::vector<Rational>& w) {
    json out = json::array();
    for (const auto& r : w) out.push_back(r.str());
    return out;
}

json violation_to_json(const Network& net, const EndotacticViolation& v) {
    json out;
    out["face_members"] = v.face_members;
    out["witness_w"] = rational_strings(v.witness_w);
    if (v.reaction) out["reaction"] = *v.reaction;
    (void)net;
    return out;
}

}  // namespace

nlohmann::json report_to_json(const Network& net, const CertificateReport& report) {
    json out;
    out["schema_version"] = kSchemaVersion;

    json se;
    se["value"] = report.strongly_endotactic.value;
    if (report.strongly_endotactic.violation)
        se["violation"] = violation_to_json(net, *report.strongly_endotactic.violation);
    out["strongly_endotactic"] = se;
    out["witness"] = report.strongly_endotactic.violation
                         ? rational_strings(report.strongly_endotactic.violation->witness_w)
                         : json(nullptr);

    json siphons = json::array();
    for (const auto& s : report.minimal_siphons) siphons.push_back(names_of(net, s));
    out["minimal_siphons"] = siphons;
    out["asiphonic"] = report.asiphonic;

    json hull;
    hull["full"] = report.conic_hull.full;
    if (!report.conic_hull.full) hull["witness"] = rational_strings(report.conic_hull.witness);
    out["conic_hull_full"] = report.conic_hull.full;
    out["conic_hull"] = hull;

    json reach;
    reach["success"] = report.reachability.success;
    json shells = json::array();
    for (std::size_t k = 0; k < report.reachability.shells.size(); ++k) {
        json shell;
        shell["species"] = names_of(net, report.reachability.shells[k]);
        shell["reactions"] = report.reachability.realizing_reactions[k];
        shells.push_back(shell);
    }
    reach["shells"] = shells;
    reach["unreached"] = names_of(net, report.reachability.unreached);
    out["reachability"] = reach;

    out["ase"] = report.ase;
    return out;
}

}  // namespace crnldp

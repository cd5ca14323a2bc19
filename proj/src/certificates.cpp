#include "crnldp/certificates.hpp"

#include <algorithm>
#include <cstdint>
#include <map>

namespace crnldp {

namespace {

std::uint32_t support_mask(const Complex& c) {
    std::uint32_t m = 0;
    for (const auto& [idx, coeff] : c.coeffs()) m |= (1u << idx);
    return m;
}

// Distinct input complexes and the map reaction -> point index.
struct InputPoints {
    std::vector<std::vector<std::int64_t>> points;
    std::vector<std::size_t> point_of_reaction;
};

InputPoints collect_inputs(const Network& net, const std::vector<std::size_t>& coords,
                           const std::vector<std::size_t>& reactions) {
    InputPoints out;
    out.point_of_reaction.assign(net.num_reactions(), SIZE_MAX);
    std::map<std::vector<std::int64_t>, std::size_t> seen;
    for (std::size_t r : reactions) {
        std::vector<std::int64_t> p(coords.size());
        for (std::size_t k = 0; k < coords.size(); ++k)
            p[k] = net.reaction(r).input.coeff(coords[k]);
        auto [it, inserted] = seen.emplace(p, out.points.size());
        if (inserted) out.points.push_back(p);
        out.point_of_reaction[r] = it->second;
    }
    return out;
}

// Exact rank-deficiency witness: nonzero w with M w = 0, or empty.
std::vector<Rational> kernel_vector(std::vector<std::vector<Rational>> rows, std::size_t d) {
    std::vector<std::size_t> pivot_cols;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < d && rank < rows.size(); ++col) {
        std::size_t pr = rank;
        while (pr < rows.size() && rows[pr][col] == 0) ++pr;
        if (pr == rows.size()) continue;
        std::swap(rows[rank], rows[pr]);
        Rational p = rows[rank][col];
        for (auto& v : rows[rank]) v /= p;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == rank || rows[i][col] == 0) continue;
            Rational f = rows[i][col];
            for (std::size_t j = 0; j < d; ++j) rows[i][j] -= f * rows[rank][j];
        }
        pivot_cols.push_back(col);
        ++rank;
    }
    if (rank == d) return {};
    std::vector<bool> is_pivot(d, false);
    for (auto c : pivot_cols) is_pivot[c] = true;
    std::size_t free_col = 0;
    while (is_pivot[free_col]) ++free_col;
    std::vector<Rational> w(d, 0);
    w[free_col] = 1;
    for (std::size_t i = 0; i < rank; ++i) w[pivot_cols[i]] = -rows[i][free_col];
    return w;
}

// Exposure-cone constraints of a face: <w, p_i - p_0> = 0 within the face and
// <w, p_0 - p_j> >= slack_bound outside it (0 for the closed cone, 1 for the
// relative interior).
void add_face_constraints(LinearProgram& lp, const std::vector<std::vector<std::int64_t>>& pts,
                          const std::vector<std::size_t>& members, Rational slack_bound) {
    const std::size_t d = pts[0].size();
    std::vector<bool> in_face(pts.size(), false);
    for (auto i : members) in_face[i] = true;
    const auto& p0 = pts[members[0]];
    for (std::size_t k = 1; k < members.size(); ++k) {
        LpConstraint c;
        c.coeffs.resize(d);
        for (std::size_t j = 0; j < d; ++j)
            c.coeffs[j] = Rational(pts[members[k]][j] - p0[j]);
        c.rel = Relation::Equal;
        lp.constraints.push_back(std::move(c));
    }
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (in_face[i]) continue;
        LpConstraint c;
        c.coeffs.resize(d);
        for (std::size_t j = 0; j < d; ++j) c.coeffs[j] = Rational(p0[j] - pts[i][j]);
        c.rel = Relation::GreaterEq;
        c.bound = slack_bound;
        lp.constraints.push_back(std::move(c));
    }
}

void add_box_constraints(LinearProgram& lp, std::size_t d) {
    for (std::size_t j = 0; j < d; ++j) {
        LpConstraint up;
        up.coeffs.assign(d, 0);
        up.coeffs[j] = 1;
        up.rel = Relation::LessEq;
        up.bound = 1;
        lp.constraints.push_back(std::move(up));
        LpConstraint lo;
        lo.coeffs.assign(d, 0);
        lo.coeffs[j] = 1;
        lo.rel = Relation::GreaterEq;
        lo.bound = -1;
        lp.constraints.push_back(std::move(lo));
    }
}

struct DefOneInput {
    const std::vector<std::vector<std::int64_t>>& points;
    // per reaction: point index, projected jump vector, and whether the
    // reaction is dissipative for every direction (P-case only)
    std::vector<std::size_t> reaction_ids;
    const std::vector<std::size_t>& point_of_reaction;
    std::vector<std::vector<std::int64_t>> jump;  // indexed like reaction_ids
    std::vector<bool> always_dissipative;
};

// Shared engine for Def. 1 and its P-restricted variant over faces of the
// input-complex set.
std::optional<EndotacticViolation> check_def_one(const DefOneInput& in) {
    const std::size_t d = in.points[0].size();
    auto faces = maximal_subsets(in.points);

    for (const auto& face : faces) {
        std::vector<bool> in_face(in.points.size(), false);
        for (auto i : face.member_indices) in_face[i] = true;

        std::vector<std::size_t> rf;  // positions into reaction_ids
        for (std::size_t k = 0; k < in.reaction_ids.size(); ++k)
            if (in_face[in.point_of_reaction[in.reaction_ids[k]]]) rf.push_back(k);

        // (i) no reaction may point outward anywhere on the closed exposure cone
        for (std::size_t k : rf) {
            if (in.always_dissipative[k]) continue;
            LinearProgram lp;
            lp.objective.resize(d);
            for (std::size_t j = 0; j < d; ++j) lp.objective[j] = Rational(in.jump[k][j]);
            add_face_constraints(lp, in.points, face.member_indices, 0);
            add_box_constraints(lp, d);
            LpSolution sol = lp_solve(lp);
            if (sol.status == LpStatus::Optimal && sol.value > 0) {
                return EndotacticViolation{face.member_indices, sol.point,
                                           in.reaction_ids[k]};
            }
        }

        // (ii) some exposing direction must see an inward reaction; an
        // always-dissipative member settles this for every direction
        bool has_unconditional = false;
        for (std::size_t k : rf)
            if (in.always_dissipative[k]) has_unconditional = true;
        if (has_unconditional) continue;

        if (face.member_indices.size() == in.points.size()) {
            // affine-hull face: exposure directions form a subspace, so the
            // relint encoding degenerates to an exact kernel computation
            std::vector<std::vector<Rational>> rows;
            const auto& p0 = in.points[face.member_indices[0]];
            for (std::size_t i = 1; i < in.points.size(); ++i) {
                std::vector<Rational> r(d);
                for (std::size_t j = 0; j < d; ++j) r[j] = Rational(in.points[i][j] - p0[j]);
                rows.push_back(std::move(r));
            }
            for (std::size_t k : rf) {
                std::vector<Rational> r(d);
                for (std::size_t j = 0; j < d; ++j) r[j] = Rational(in.jump[k][j]);
                rows.push_back(std::move(r));
            }
            auto w = kernel_vector(std::move(rows), d);
            if (!w.empty())
                return EndotacticViolation{face.member_indices, std::move(w), std::nullopt};
        } else {
            LinearProgram lp;
            lp.objective.assign(d, 0);
            add_face_constraints(lp, in.points, face.member_indices, 1);
            for (std::size_t k : rf) {
                LpConstraint c;
                c.coeffs.resize(d);
                for (std::size_t j = 0; j < d; ++j) c.coeffs[j] = Rational(in.jump[k][j]);
                c.rel = Relation::Equal;
                lp.constraints.push_back(std::move(c));
            }
            LpSolution sol = lp_solve(lp);
            if (sol.status == LpStatus::Optimal)
                return EndotacticViolation{face.member_indices, sol.point, std::nullopt};
        }
    }
    return std::nullopt;
}

}  // namespace

std::vector<std::vector<std::size_t>> find_siphons(const Network& net,
                                                   const SiphonOptions& opts) {
    const std::size_t d = net.num_species();
    if (d > opts.max_species)
        throw TooManySpecies("find_siphons: species count exceeds the configured cap");
    const std::size_t m = net.num_reactions();

    std::vector<std::uint32_t> in_mask(m), out_mask(m);
    for (std::size_t r = 0; r < m; ++r) {
        in_mask[r] = support_mask(net.reaction(r).input);
        out_mask[r] = support_mask(net.reaction(r).output);
    }

    std::vector<std::uint32_t> siphons;
    for (std::uint32_t P = 1; P < (1u << d); ++P) {
        bool ok = true;
        for (std::size_t r = 0; r < m && ok; ++r)
            if ((out_mask[r] & P) != 0 && (in_mask[r] & P) == 0) ok = false;
        if (ok) siphons.push_back(P);
    }

    std::vector<std::vector<std::size_t>> minimal;
    for (std::uint32_t P : siphons) {
        bool is_min = true;
        for (std::uint32_t Q : siphons)
            if (Q != P && (Q & P) == Q) is_min = false;
        if (!is_min) continue;
        std::vector<std::size_t> s;
        for (std::size_t i = 0; i < d; ++i)
            if (P & (1u << i)) s.push_back(i);
        minimal.push_back(std::move(s));
    }
    std::sort(minimal.begin(), minimal.end());
    return minimal;
}

EndotacticVerdict is_strongly_endotactic(const Network& net) {
    std::vector<std::size_t> coords(net.num_species());
    for (std::size_t i = 0; i < coords.size(); ++i) coords[i] = i;
    std::vector<std::size_t> all_reactions(net.num_reactions());
    for (std::size_t r = 0; r < all_reactions.size(); ++r) all_reactions[r] = r;

    InputPoints ip = collect_inputs(net, coords, all_reactions);
    DefOneInput in{ip.points, all_reactions, ip.point_of_reaction, {}, {}};
    for (std::size_t r : all_reactions) {
        in.jump.push_back(net.reaction_vec(r).delta);
        in.always_dissipative.push_back(false);
    }
    auto violation = check_def_one(in);
    return {!violation.has_value(), std::move(violation)};
}

PEndotacticResult is_strongly_P_endotactic(const Network& net,
                                           const std::vector<std::size_t>& P) {
    if (P.empty()) throw std::invalid_argument("P must be non-empty");
    std::vector<bool> in_P(net.num_species(), false);
    for (auto i : P) in_P.at(i) = true;

    std::vector<std::size_t> rp;  // R(P): inputs supported inside P
    for (std::size_t r = 0; r < net.num_reactions(); ++r) {
        bool ok = true;
        for (const auto& [idx, c] : net.reaction(r).input.coeffs())
            if (!in_P[idx]) ok = false;
        if (ok) rp.push_back(r);
    }
    if (rp.empty()) return {PVerdict::NotApplicable, std::nullopt};

    std::vector<std::size_t> coords(P.begin(), P.end());
    std::sort(coords.begin(), coords.end());
    InputPoints ip = collect_inputs(net, coords, rp);

    DefOneInput in{ip.points, rp, ip.point_of_reaction, {}, {}};
    for (std::size_t r : rp) {
        std::vector<std::int64_t> proj(coords.size());
        for (std::size_t k = 0; k < coords.size(); ++k)
            proj[k] = net.reaction_vec(r).delta[coords[k]];
        in.jump.push_back(std::move(proj));
        bool outside_output = false;
        for (const auto& [idx, c] : net.reaction(r).output.coeffs())
            if (!in_P[idx]) outside_output = true;
        in.always_dissipative.push_back(outside_output);
    }
    auto violation = check_def_one(in);
    if (violation) return {PVerdict::False, std::move(violation)};
    return {PVerdict::True, std::nullopt};
}

ConicHullResult conic_hull_full(const Network& net) {
    const std::size_t d = net.num_species();
    for (std::size_t axis = 0; axis < d; ++axis) {
        for (int sign : {+1, -1}) {
            LinearProgram lp;
            lp.objective.assign(d, 0);
            lp.objective[axis] = sign;
            for (std::size_t r = 0; r < net.num_reactions(); ++r) {
                LpConstraint c;
                c.coeffs.resize(d);
                for (std::size_t j = 0; j < d; ++j)
                    c.coeffs[j] = Rational(net.reaction_vec(r).delta[j]);
                c.rel = Relation::GreaterEq;
                c.bound = 0;
                lp.constraints.push_back(std::move(c));
            }
            add_box_constraints(lp, d);
            LpSolution sol = lp_solve(lp);
            if (sol.status == LpStatus::Optimal && sol.value > 0)
                return {false, std::move(sol.point)};
        }
    }
    return {true, {}};
}

ReachabilityResult reachability_chain(const Network& net) {
    const std::size_t d = net.num_species();
    ReachabilityResult out;
    std::vector<bool> reached(d, false);
    while (true) {
        std::vector<std::size_t> shell;
        std::vector<std::size_t> shell_reactions;
        for (std::size_t r = 0; r < net.num_reactions(); ++r) {
            bool inputs_covered = true;
            for (const auto& [idx, c] : net.reaction(r).input.coeffs())
                if (!reached[idx]) inputs_covered = false;
            if (!inputs_covered) continue;
            bool contributes = false;
            for (const auto& [idx, c] : net.reaction(r).output.coeffs()) {
                if (!reached[idx] &&
                    std::find(shell.begin(), shell.end(), idx) == shell.end()) {
                    shell.push_back(idx);
                    contributes = true;
                }
            }
            if (contributes) shell_reactions.push_back(r);
        }
        if (shell.empty()) break;
        std::sort(shell.begin(), shell.end());
        for (auto i : shell) reached[i] = true;
        out.shells.push_back(std::move(shell));
        out.realizing_reactions.push_back(std::move(shell_reactions));
    }
    for (std::size_t i = 0; i < d; ++i)
        if (!reached[i]) out.unreached.push_back(i);
    out.success = out.unreached.empty();
    return out;
}

CertificateReport full_report(const Network& net) {
    CertificateReport rep;
    rep.strongly_endotactic = is_strongly_endotactic(net);
    rep.minimal_siphons = find_siphons(net);
    rep.asiphonic = rep.minimal_siphons.empty();
    rep.conic_hull = conic_hull_full(net);
    rep.reachability = reachability_chain(net);
    rep.ase = rep.strongly_endotactic.value && rep.asiphonic;
    return rep;
}

}  // namespace crnldp

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <vector>

namespace crnldp {

using Rational = boost::multiprecision::cpp_rational;

enum class Relation { LessEq, Equal, GreaterEq };

struct LpConstraint {
    std::vector<Rational> coeffs;
    Relation rel = Relation::LessEq;
    Rational bound = 0;
};

/// maximize objective . x subject to the constraints; variables are free.
struct LinearProgram {
    std::vector<Rational> objective;
    std::vector<LpConstraint> constraints;
};

enum class LpStatus { Optimal, Unbounded, Infeasible };

struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    Rational value = 0;
    std::vector<Rational> point;  // optimal point when Optimal
    std::vector<Rational> ray;    // improving recession direction when Unbounded
};

/// Exact two-phase simplex with Bland's rule. Every arithmetic step is
/// rational, so Optimal points satisfy the constraints exactly.
LpSolution lp_solve(const LinearProgram& lp);

}  // namespace crnldp

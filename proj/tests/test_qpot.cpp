#include "doctest.h"

#include <cmath>
#include <limits>

#include "crnldp/parse.hpp"
#include "crnldp/quasipotential.hpp"
#include "crnldp/rng.hpp"

using namespace crnldp;

namespace {

Network net_of(const std::string& src) {
    auto res = parse_network(src);
    REQUIRE(res.ok());
    return std::move(*res.network);
}

Network schlogl() {
    return net_of("0 -> A @ 6\nA -> 0 @ 11\n2 A -> 3 A @ 6\n3 A -> 2 A @ 1\n");
}

// birth-death with birth b(u), death d(u): V(x* -> y) = int_{x*}^{y} log(d/b)
double bd_quadrature(double lo, double hi, auto birth, auto death) {
    const int N = 20000;
    double h = (hi - lo) / N, acc = 0.0;
    for (int i = 0; i < N; ++i) {
        double u = lo + (i + 0.5) * h;
        acc += std::log(death(u) / birth(u)) * h;
    }
    return acc;
}

QPotOptions coarse() {
    QPotOptions o;
    o.segments = 32;
    o.restarts = 2;
    o.max_sweeps = 200;
    o.tol = 1e-5;
    return o;
}

double brute_w_graph(const std::vector<std::vector<double>>& c, std::size_t root) {
    const std::size_t n = c.size();
    std::vector<std::size_t> others;
    for (std::size_t i = 0; i < n; ++i)
        if (i != root) others.push_back(i);
    const std::size_t k = others.size();
    double best = std::numeric_limits<double>::infinity();
    std::size_t total = 1;
    for (std::size_t i = 0; i < k; ++i) total *= (n - 1);
    for (std::size_t code = 0; code < total; ++code) {
        std::vector<std::size_t> g(n, root);
        std::size_t rem = code;
        bool ok = true;
        double sum = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            std::size_t pick = rem % (n - 1);
            rem /= (n - 1);
            // targets: any node other than the source
            std::size_t tgt = pick >= others[i] ? pick + 1 : pick;
            g[others[i]] = tgt;
            sum += c[others[i]][tgt];
        }
        // every node must reach the root under iteration
        for (auto s : others) {
            std::size_t cur = s;
            for (std::size_t hop = 0; hop < n && cur != root; ++hop) cur = g[cur];
            if (cur != root) ok = false;
        }
        if (ok) best = std::min(best, sum);
    }
    return best;
}

}  // namespace

TEST_CASE("quasipotential vanishes for x = y and along the flow") {
    Network n = schlogl();
    auto dom = DomainSpec::box({0.0}, {5.0});
    auto same = quasipotential(n, {{1.0}}, {{1.0}}, dom, coarse());
    CHECK(same.value <= 1e-8);
    // 1.5 flows downhill to the attractor at 1
    auto down = quasipotential(n, {{1.5}}, {{1.0}}, dom, coarse());
    CHECK(down.value <= 1e-3);
}

TEST_CASE("schlogl barrier matches the birth-death quadrature") {
    Network n = schlogl();
    double oracle = bd_quadrature(
        1.0, 2.0, [](double u) { return 6.0 + 6.0 * u * u; },
        [](double u) { return 11.0 * u + u * u * u; });
    CHECK(oracle == doctest::Approx(0.013460295857).epsilon(1e-6));
    auto res = quasipotential(n, {{1.0}}, {{2.0}}, DomainSpec::box({0.0}, {5.0}), coarse());
    CHECK(res.converged);
    CHECK(res.value == doctest::Approx(oracle).epsilon(0.02));
}

TEST_CASE("linear birth-death against the closed form") {
    // b = 2, d = u, attractor at 2: V(2 -> 3) = 3 log(3/2) - 1
    Network n = net_of("0 -> A @ 2.0\nA -> 0 @ 1.0\n");
    double oracle = 3.0 * std::log(1.5) - 1.0;
    auto res = quasipotential(n, {{2.0}}, {{3.0}}, DomainSpec::box({0.0}, {6.0}), coarse());
    CHECK(res.value == doctest::Approx(oracle).epsilon(0.02));
    // and the reverse direction is free
    auto rev = quasipotential(n, {{3.0}}, {{2.0}}, DomainSpec::box({0.0}, {6.0}), coarse());
    CHECK(rev.value <= 1e-3);
}

TEST_CASE("triangle inequality") {
    Network n = net_of("0 -> A @ 2.0\nA -> 0 @ 1.0\n");
    auto dom = DomainSpec::box({0.0}, {6.0});
    double v_ac = quasipotential(n, {{2.0}}, {{3.5}}, dom, coarse()).value;
    double v_ab = quasipotential(n, {{2.0}}, {{3.0}}, dom, coarse()).value;
    double v_bc = quasipotential(n, {{3.0}}, {{3.5}}, dom, coarse()).value;
    CHECK(v_ac <= v_ab + v_bc + 1e-3);
}

TEST_CASE("shrinking the domain cannot lower the cost") {
    Network n = schlogl();
    auto wide = quasipotential(n, {{1.0}}, {{2.0}}, DomainSpec::box({0.0}, {5.0}), coarse());
    auto tight =
        quasipotential(n, {{1.0}}, {{2.0}}, DomainSpec::box({0.5}, {2.2}), coarse());
    CHECK(tight.value >= wide.value - 1e-4);
}

TEST_CASE("refinement is stable") {
    Network n = schlogl();
    auto dom = DomainSpec::box({0.0}, {5.0});
    QPotOptions c32 = coarse();
    QPotOptions c128 = coarse();
    c128.segments = 128;
    c128.max_sweeps = 300;
    double v32 = quasipotential(n, {{1.0}}, {{2.0}}, dom, c32).value;
    double v128 = quasipotential(n, {{1.0}}, {{2.0}}, dom, c128).value;
    CHECK(v128 == doctest::Approx(v32).epsilon(0.02));
}

TEST_CASE("w-graph minimization: worked examples") {
    // two attractors + boundary node 2 as root
    std::vector<std::vector<double>> c{{0.0, 1.0, 5.0}, {2.0, 0.0, 0.5}, {0.0, 0.0, 0.0}};
    auto res = w_graph_min(c, 2);
    // options: {0->2, 1->2} = 5.5; {0->1, 1->2} = 1.5; {1->0, 0->2} = 7
    CHECK(res.value == doctest::Approx(1.5));
    CHECK(res.assignment[0] == 1);
    CHECK(res.assignment[1] == 2);
    CHECK(res.assignment[2] == 2);

    std::vector<std::vector<double>> zero(4, std::vector<double>(4, 0.0));
    CHECK(w_graph_min(zero, 0).value == 0.0);
}

TEST_CASE("w-graph minimization: exhaustive oracle on random matrices") {
    CounterRng rng(31, 0);
    for (int trial = 0; trial < 60; ++trial) {
        std::size_t n = 3 + rng.next_below(3);  // 3..5 nodes
        std::vector<std::vector<double>> c(n, std::vector<double>(n, 0.0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) c[i][j] = rng.next_uniform(0.0, 10.0);
        std::size_t root = rng.next_below(n);
        auto res = w_graph_min(c, root);
        CHECK(res.value == doctest::Approx(brute_w_graph(c, root)).epsilon(1e-12));
        // reported assignment is feasible and attains the value
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == root) {
                CHECK(res.assignment[i] == root);
                continue;
            }
            sum += c[i][res.assignment[i]];
            std::size_t cur = i;
            for (std::size_t hop = 0; hop < n && cur != root; ++hop)
                cur = res.assignment[cur];
            CHECK(cur == root);
        }
        CHECK(sum == doctest::Approx(res.value));
    }
}

TEST_CASE("w-graph cap") {
    std::vector<std::vector<double>> big(9, std::vector<double>(9, 1.0));
    CHECK_THROWS_AS(w_graph_min(big, 0), TooManyAttractors);
}

TEST_CASE("attractor graph and stability on schlogl") {
    Network n = schlogl();
    auto dom = DomainSpec::box({0.0}, {4.0});
    std::vector<Concentration> nodes{{{1.0}}, {{2.0}}, {{3.0}}};
    QPotOptions o = coarse();
    o.boundary_samples_per_face = 4;
    auto g = attractor_graph(n, dom, nodes, o);
    REQUIRE(g.costs.size() == 3);
    // climbing out of a stable attractor costs, sliding off the saddle is free
    CHECK(g.costs[0][1] == doctest::Approx(0.013460295857).epsilon(0.03));
    CHECK(g.costs[1][0] <= 1e-3);
    CHECK(g.costs[1][2] <= 1e-3);
    CHECK(g.costs[2][1] > 1e-3);
    // V(1 -> 3) climbs the same barrier then descends for free
    CHECK(g.costs[0][2] == doctest::Approx(g.costs[0][1]).epsilon(0.05));

    CHECK(stability_check(n, g, 0, 0.05, o));
    CHECK_FALSE(stability_check(n, g, 1, 0.05, o));
    CHECK(stability_check(n, g, 2, 0.05, o));
}

TEST_CASE("exit exponent: near-boundary attractor escapes for free") {
    Network n = net_of("0 -> A @ 2.0\nA -> 0 @ 1.0\n");
    QPotOptions o = coarse();
    o.boundary_samples_per_face = 2;
    double small = exit_exponent(n, DomainSpec::box({0.0}, {2.05}), Concentration{{2.0}}, o);
    CHECK(small < 0.01);
    double big = exit_exponent(n, DomainSpec::box({0.0}, {3.0}), Concentration{{2.0}}, o);
    CHECK(big == doctest::Approx(3.0 * std::log(1.5) - 1.0).epsilon(0.03));
}

TEST_CASE("exit exponent requires a bounded domain") {
    Network n = net_of("0 -> A @ 2.0\nA -> 0 @ 1.0\n");
    CHECK_THROWS(exit_exponent(n, DomainSpec::whole_orthant(), Concentration{{2.0}}));
}

#include "doctest.h"

#include <cmath>

#include "crnldp/network.hpp"
#include "crnldp/ode.hpp"
#include "crnldp/parse.hpp"
#include "crnldp/rates.hpp"
#include "crnldp/rng.hpp"
#include "crnldp/ssa.hpp"

using namespace crnldp;

namespace {

Network net_of(const std::string& src) {
    auto res = parse_network(src);
    REQUIRE(res.ok());
    return std::move(*res.network);
}

Network example1() {
    return net_of("0 -> A + B @ 1.0\nA + B -> 2 B @ 1.0\n2 B -> A @ 1.0\n");
}

Network schlogl() {
    return net_of("0 -> A @ 6\nA -> 0 @ 11\n2 A -> 3 A @ 6\n3 A -> 2 A @ 1\n");
}

}  // namespace

TEST_CASE("reaction vectors") {
    Network n = example1();
    CHECK(n.reaction_vec(0).delta == std::vector<std::int64_t>{1, 1});   // 0 -> A+B
    CHECK(n.reaction_vec(1).delta == std::vector<std::int64_t>{-1, 1});  // A+B -> 2B
    CHECK(n.reaction_vec(2).delta == std::vector<std::int64_t>{1, -2});  // 2B -> A
}

TEST_CASE("network validation rejects no-op and bad rates") {
    Complex a(std::map<std::size_t, std::int64_t>{{0, 1}});
    CHECK_THROWS(Network({"A"}, {{a, a, 1.0}}));
    Complex b(std::map<std::size_t, std::int64_t>{{0, 2}});
    CHECK_THROWS(Network({"A"}, {{a, b, 0.0}}));
    CHECK_THROWS(Network({"A"}, {{a, b, -1.0}}));
    CHECK_THROWS(Network({"A"}, {}));
}

TEST_CASE("asymptotic rate monomials") {
    Network n = net_of("A + B -> 2 B @ 2.0\n0 -> A @ 3.0\n2 B -> A @ 1.0\n");
    CHECK(asymptotic_rate(n, 0, {{0.5, 2.0}}) == doctest::Approx(2.0));
    CHECK(asymptotic_rate(n, 1, {{0.5, 2.0}}) == doctest::Approx(3.0));
    CHECK(asymptotic_rate(n, 1, {{7.0, 0.1}}) == doctest::Approx(3.0));
    CHECK(asymptotic_rate(n, 2, {{1.0, 0.0}}) == doctest::Approx(0.0));
}

TEST_CASE("volume rate falling factorials") {
    Network n = net_of("2 A -> A @ 1.0\n");
    CountState s;
    s.volume = 10.0;
    s.counts = {3};
    // 10^-2 * binom(3,2) * 2! = 0.06
    CHECK(volume_rate(n, 0, s) == doctest::Approx(0.06));
    s.counts = {1};
    CHECK(volume_rate(n, 0, s) == doctest::Approx(0.0));
}

TEST_CASE("volume rate converges to asymptotic rate at O(1/v)") {
    Network n = schlogl();
    Concentration x{{1.5}};
    double prev_err = 1e18;
    for (double v : {100.0, 1000.0, 10000.0}) {
        CountState s = to_lattice(x, v);
        double err = 0.0;
        for (std::size_t r = 0; r < n.num_reactions(); ++r) {
            double vr = volume_rate(n, r, s);
            double ar = asymptotic_rate(n, r, x);
            CHECK(vr <= ar + 1e-12);  // Lambda <= lambda pointwise
            err = std::max(err, std::abs(vr - ar));
        }
        CHECK(err < prev_err);
        CHECK(err < 10.0 / v);
        prev_err = err;
    }
}

TEST_CASE("drift field matches the closed form and the definition") {
    Network n = example1();
    double k1 = 1.0, k2 = 1.0, k3 = 1.0;
    for (double xa : {0.3, 1.0, 2.5}) {
        for (double xb : {0.1, 1.0, 3.0}) {
            auto f = drift_field(n, {{xa, xb}});
            CHECK(f[0] == doctest::Approx(k1 - k2 * xa * xb + k3 * xb * xb));
            CHECK(f[1] == doctest::Approx(k1 + k2 * xa * xb - 2 * k3 * xb * xb));
            // definitional consistency: sum of lambda_r c^r
            std::vector<double> g(2, 0.0);
            for (std::size_t r = 0; r < n.num_reactions(); ++r) {
                double lam = asymptotic_rate(n, r, {{xa, xb}});
                for (int i = 0; i < 2; ++i)
                    g[i] += lam * static_cast<double>(n.reaction_vec(r).delta[i]);
            }
            CHECK(f[0] == doctest::Approx(g[0]));
            CHECK(f[1] == doctest::Approx(g[1]));
        }
    }
}

TEST_CASE("schlogl drift vanishes at the cubic roots") {
    Network n = schlogl();
    for (double root : {1.0, 2.0, 3.0})
        CHECK(drift_field(n, {{root}})[0] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("jacobian: schlogl closed form and finite differences") {
    Network n = schlogl();
    for (double x : {0.5, 1.7, 3.2}) {
        double expect = 2 * 6 * x - 11 - 3 * 1 * x * x;
        CHECK(jacobian(n, {{x}})[0][0] == doctest::Approx(expect));
    }

    Network e1 = example1();
    CounterRng rng(42, 0);
    for (int trial = 0; trial < 100; ++trial) {
        Concentration x{{rng.next_uniform(0.1, 5.0), rng.next_uniform(0.1, 5.0)}};
        auto J = jacobian(e1, x);
        const double h = 1e-6;
        for (int j = 0; j < 2; ++j) {
            Concentration xp = x, xm = x;
            xp.values[j] += h;
            xm.values[j] -= h;
            auto fp = drift_field(e1, xp);
            auto fm = drift_field(e1, xm);
            for (int i = 0; i < 2; ++i) {
                double fd = (fp[i] - fm[i]) / (2 * h);
                CHECK(J[i][j] == doctest::Approx(fd).epsilon(1e-6));
            }
        }
    }
}

TEST_CASE("jacobian of constant-rate network is zero") {
    Network n = net_of("0 -> A @ 2.0\n0 -> B @ 1.0\nA -> B @ 1.0\n");
    auto J = jacobian(n, {{3.0, 4.0}});
    CHECK(J[0][0] == doctest::Approx(-1.0));  // A -> B still depends on A
    Network c = net_of("0 -> A @ 2.0\n0 -> A + B @ 1.0\n");
    for (auto& row : jacobian(c, {{3.0, 4.0}}))
        for (double v : row) CHECK(v == doctest::Approx(0.0));
}

TEST_CASE("lyapunov function values and growth") {
    CHECK(lyapunov_U({{1.0, 1.0}}) == doctest::Approx(1.0));
    CHECK(lyapunov_U({{0.0, 0.0}}) == doctest::Approx(3.0));  // d + 1
    CHECK(lyapunov_U({{0.0}}) == doctest::Approx(2.0));

    CounterRng rng(7, 0);
    for (int trial = 0; trial < 200; ++trial) {
        Concentration x{{rng.next_uniform(0.0, 10.0), rng.next_uniform(0.0, 10.0)}};
        CHECK(lyapunov_U(x) >= 1.0 - 1e-12);
    }
    // compact sublevel sets: U grows monotonically along rays beyond e^2
    for (int trial = 0; trial < 20; ++trial) {
        double u = rng.next_uniform(0.1, 1.0), v = rng.next_uniform(0.1, 1.0);
        double norm = u + v;
        double prev = 0.0;
        for (double t = 10.0; t < 200.0; t *= 1.5) {
            double val = lyapunov_U({{t * u / norm, t * v / norm}});
            CHECK(val > prev);
            prev = val;
        }
    }
}

TEST_CASE("generator drift: growth network positive, schlogl shell negative") {
    Network grow = net_of("0 -> A @ 1.0\n");
    for (double v : {5.0, 50.0}) {
        CountState s;
        s.volume = v;
        s.counts = {static_cast<std::int64_t>(10 * v)};
        CHECK(generator_drift(grow, s) > 0.0);
    }
    Network n = schlogl();
    CountState s;
    s.volume = 50.0;
    s.counts = {static_cast<std::int64_t>(20 * 50)};  // shell |x|_1 = 20
    CHECK(generator_drift(n, s) < 0.0);
}

TEST_CASE("generator drift matches direct powers at small volume") {
    Network n = schlogl();
    for (double v : {2.0, 5.0}) {
        for (double xval : {0.5, 2.0, 4.0}) {
            CountState s;
            s.volume = v;
            s.counts = {static_cast<std::int64_t>(xval * v)};
            Concentration x = s.concentration();
            double direct = 0.0;
            double Uv = std::pow(lyapunov_U(x), v);
            for (std::size_t r = 0; r < n.num_reactions(); ++r) {
                Concentration xp = x;
                bool inside = true;
                for (std::size_t i = 0; i < xp.values.size(); ++i) {
                    xp.values[i] += static_cast<double>(n.reaction_vec(r).delta[i]) / v;
                    if (xp.values[i] < 0.0) inside = false;
                }
                if (!inside) continue;
                direct += volume_rate(n, r, s) * (std::pow(lyapunov_U(xp), v) - Uv);
            }
            direct *= std::pow(lyapunov_U(x), 1.0 - v);
            CHECK(generator_drift(n, s) == doctest::Approx(direct).epsilon(1e-9));
        }
    }
}

TEST_CASE("ode: schlogl converges to the low stable point from below") {
    Network n = schlogl();
    auto traj = integrate_ode(n, {{0.5}}, 40.0);
    CHECK(traj.states.back().values[0] == doctest::Approx(1.0).epsilon(1e-6));
    for (const auto& st : traj.states) CHECK(st.values[0] >= 0.0);
}

TEST_CASE("ode: mass conservation when every jump sums to zero") {
    Network n = net_of("A -> B @ 2.0\nB -> A @ 1.0\n");
    auto traj = integrate_ode(n, {{3.0, 1.0}}, 10.0);
    for (const auto& st : traj.states)
        CHECK(st.values[0] + st.values[1] == doctest::Approx(4.0).epsilon(1e-7));
}

TEST_CASE("ode: endpoint settles as tolerance decreases") {
    Network n = schlogl();
    double ref = integrate_ode(n, {{2.5}}, 5.0, {1e-12}).states.back().values[0];
    double prev_err = 1e18;
    for (double tol : {1e-4, 1e-6, 1e-8}) {
        double end = integrate_ode(n, {{2.5}}, 5.0, {tol}).states.back().values[0];
        double err = std::abs(end - ref);
        CHECK(err <= prev_err + 1e-12);
        prev_err = err;
    }
}

TEST_CASE("ode: blowup detection") {
    Network n = net_of("A -> 2 A @ 5.0\n2 A -> 4 A @ 5.0\n");
    CHECK_THROWS_AS(integrate_ode(n, {{10.0}}, 100.0), BlowupDetected);
}

TEST_CASE("find_attractors: schlogl and linear birth-death") {
    Network n = schlogl();
    auto att = find_attractors(n, {{0.0}, {4.0}}, 64, 3);
    REQUIRE(att.size() == 3);
    CHECK(att[0].point.values[0] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(att[0].stable);
    CHECK(att[1].point.values[0] == doctest::Approx(2.0).epsilon(1e-6));
    CHECK_FALSE(att[1].stable);
    CHECK(att[2].point.values[0] == doctest::Approx(3.0).epsilon(1e-6));
    CHECK(att[2].stable);

    Network bd = net_of("0 -> A @ 3.0\nA -> 0 @ 2.0\n");
    auto batt = find_attractors(bd, {{0.0}, {5.0}}, 32, 3);
    REQUIRE(batt.size() == 1);
    CHECK(batt[0].point.values[0] == doctest::Approx(1.5).epsilon(1e-8));
    CHECK(batt[0].stable);
}

TEST_CASE("find_attractors: seed determinism") {
    Network n = schlogl();
    auto a = find_attractors(n, {{0.0}, {4.0}}, 48, 9);
    auto b = find_attractors(n, {{0.0}, {4.0}}, 48, 9);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].point.values == b[i].point.values);
        CHECK(a[i].stable == b[i].stable);
    }
}

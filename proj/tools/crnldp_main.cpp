#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "crnldp/certificates.hpp"
#include "crnldp/lagrangian.hpp"
#include "crnldp/ode.hpp"
#include "crnldp/parse.hpp"
#include "crnldp/quasipotential.hpp"
#include "crnldp/rates.hpp"
#include "crnldp/report_json.hpp"
#include "crnldp/rng.hpp"
#include "crnldp/ssa.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace crnldp;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 1;
constexpr int kExitNotAse = 2;
constexpr int kExitBlowup = 3;
constexpr int kExitEventCap = 4;
constexpr int kExitCensoring = 5;

struct CliError : std::runtime_error {
    int code;
    CliError(int c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

Network load_network(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CliError(kExitParse, path + ": cannot open file");
    std::stringstream buf;
    buf << in.rdbuf();
    ParseResult res = parse_network(buf.str());
    if (!res.ok()) {
        const ParseError& e = *res.error;
        throw CliError(kExitParse, path + ":" + std::to_string(e.line) + ":" +
                                       std::to_string(e.column) + ": " + to_string(e.kind) +
                                       ": " + e.message);
    }
    return std::move(*res.network);
}

std::vector<std::pair<std::string, std::string>> split_named(const std::string& s, char eq) {
    std::vector<std::pair<std::string, std::string>> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto pos = item.find(eq);
        if (pos == std::string::npos)
            throw CliError(kExitParse, "expected '<name>" + std::string(1, eq) +
                                           "<value>' in '" + item + "'");
        out.emplace_back(item.substr(0, pos), item.substr(pos + 1));
    }
    return out;
}

double to_double(const std::string& s) {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw CliError(kExitParse, "bad number '" + s + "'");
    return v;
}

/// Named-species vector: "A=1.0,B=0.5"; unnamed species default to 0.
std::vector<double> parse_named_vector(const Network& net, const std::string& spec) {
    std::vector<double> x(net.num_species(), 0.0);
    if (spec.empty()) return x;
    for (const auto& [name, value] : split_named(spec, '=')) {
        try {
            x[net.species_index(name)] = to_double(value);
        } catch (const std::out_of_range&) {
            throw CliError(kExitParse, "unknown species '" + name + "'");
        }
    }
    return x;
}

/// Per-species bounds: "A<=2,B>=0.5". Only box constraints.
DomainSpec parse_domain(const Network& net, const std::string& spec) {
    DomainSpec dom;
    if (spec.empty()) return dom;
    dom.lower.assign(net.num_species(), 0.0);
    dom.upper.assign(net.num_species(), std::numeric_limits<double>::infinity());
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto le = item.find("<=");
        auto ge = item.find(">=");
        std::size_t idx;
        try {
            if (le != std::string::npos) {
                idx = net.species_index(item.substr(0, le));
                dom.upper[idx] = to_double(item.substr(le + 2));
            } else if (ge != std::string::npos) {
                idx = net.species_index(item.substr(0, ge));
                dom.lower[idx] = to_double(item.substr(ge + 2));
            } else {
                throw CliError(kExitParse, "expected '<species><=v' or '<species>>=v' in '" +
                                               item + "'");
            }
        } catch (const std::out_of_range&) {
            throw CliError(kExitParse, "unknown species in constraint '" + item + "'");
        }
    }
    return dom;
}

/// Box: "A=0:2,B=0:3"; omitted species default to [0, 10].
Box parse_box(const Network& net, const std::string& spec) {
    Box box;
    box.lo.assign(net.num_species(), 0.0);
    box.hi.assign(net.num_species(), 10.0);
    if (spec.empty()) return box;
    for (const auto& [name, range] : split_named(spec, '=')) {
        auto colon = range.find(':');
        if (colon == std::string::npos)
            throw CliError(kExitParse, "expected '<lo>:<hi>' in '" + range + "'");
        std::size_t idx;
        try {
            idx = net.species_index(name);
        } catch (const std::out_of_range&) {
            throw CliError(kExitParse, "unknown species '" + name + "'");
        }
        box.lo[idx] = to_double(range.substr(0, colon));
        box.hi[idx] = to_double(range.substr(colon + 1));
    }
    return box;
}

/// Volume grid: "40:160:40" -> {40,80,120,160}, or a comma list, or one value.
std::vector<double> parse_grid(const std::string& spec) {
    std::vector<double> grid;
    if (spec.find(',') != std::string::npos) {
        std::stringstream ss(spec);
        std::string item;
        while (std::getline(ss, item, ',')) grid.push_back(to_double(item));
        return grid;
    }
    auto c1 = spec.find(':');
    if (c1 == std::string::npos) return {to_double(spec)};
    auto c2 = spec.find(':', c1 + 1);
    if (c2 == std::string::npos) throw CliError(kExitParse, "grid needs 'lo:hi:step'");
    double lo = to_double(spec.substr(0, c1));
    double hi = to_double(spec.substr(c1 + 1, c2 - c1 - 1));
    double step = to_double(spec.substr(c2 + 1));
    if (step <= 0 || hi < lo) throw CliError(kExitParse, "bad grid '" + spec + "'");
    for (double v = lo; v <= hi + 1e-9; v += step) grid.push_back(v);
    return grid;
}

void atomic_write(const fs::path& path, const std::string& content) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw CliError(kExitParse, "cannot write " + tmp.string());
        out << content;
    }
    fs::rename(tmp, path);
}

void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty())
        std::cout << content;
    else
        atomic_write(out_path, content);
}

std::string csv_header(const Network& net, const std::string& prefix) {
    std::string h = prefix;
    for (const auto& s : net.species()) h += "," + s;
    return h + "\n";
}

json vec_json(const std::vector<double>& v) { return json(v); }

// ---- subcommand bodies ----

int run_check(const std::string& file, const std::string& out) {
    Network net = load_network(file);
    CertificateReport report = full_report(net);
    emit(out, report_to_json(net, report).dump(2) + "\n");
    return report.ase ? kExitOk : kExitNotAse;
}

int run_ode(const std::string& file, const std::string& x0_spec, double t_end, double tol,
            const std::string& out) {
    Network net = load_network(file);
    Concentration x0{parse_named_vector(net, x0_spec)};
    OdeOptions opts;
    opts.tol = tol;
    OdeTrajectory traj = integrate_ode(net, x0, t_end, opts);
    std::ostringstream csv;
    csv << csv_header(net, "t");
    csv.precision(12);
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        csv << traj.times[i];
        for (double v : traj.states[i].values) csv << "," << v;
        csv << "\n";
    }
    emit(out, csv.str());
    return kExitOk;
}

int run_simulate(const std::string& file, double volume, const std::string& x0_spec,
                 double t_end, std::size_t replicas, std::uint64_t seed,
                 const std::string& out_dir) {
    Network net = load_network(file);
    Concentration x0{parse_named_vector(net, x0_spec)};
    CountState start = to_lattice(x0, volume);
    fs::create_directories(out_dir);

    json summary;
    summary["schema_version"] = kSchemaVersion;
    summary["seed"] = seed;
    summary["volume"] = volume;
    summary["replicas"] = json::array();
    for (std::size_t rep = 0; rep < replicas; ++rep) {
        CounterRng stream(seed, rep + 1);
        JumpTrajectory traj = simulate(net, volume, start, t_end, stream.next_u64());
        std::ostringstream csv;
        csv << csv_header(net, "t,reaction");
        csv.precision(12);
        CountState s = traj.initial;
        csv << 0.0 << ",-";
        for (auto n : s.counts) csv << "," << static_cast<double>(n) / volume;
        csv << "\n";
        for (const auto& ev : traj.events) {
            const auto& delta = net.reaction_vec(ev.reaction).delta;
            for (std::size_t i = 0; i < s.counts.size(); ++i) s.counts[i] += delta[i];
            csv << ev.time << "," << ev.reaction;
            for (auto n : s.counts) csv << "," << static_cast<double>(n) / volume;
            csv << "\n";
        }
        atomic_write(fs::path(out_dir) / ("rep_" + std::to_string(rep) + ".csv"), csv.str());
        json entry;
        entry["events"] = traj.events.size();
        entry["absorbed"] = traj.absorbed;
        entry["final_state"] = s.counts;
        summary["replicas"].push_back(entry);
    }
    atomic_write(fs::path(out_dir) / "summary.json", summary.dump(2) + "\n");
    return kExitOk;
}

int run_lagrangian(const std::string& file, const std::string& x_spec,
                   const std::string& xi_spec, const std::string& out) {
    Network net = load_network(file);
    Concentration x{parse_named_vector(net, x_spec)};
    std::vector<double> xi = parse_named_vector(net, xi_spec);
    std::vector<double> lambda(net.num_reactions());
    for (std::size_t r = 0; r < net.num_reactions(); ++r)
        lambda[r] = asymptotic_rate(net, r, x);
    LagrangianResult res = lagrangian(net, lambda, xi);

    json j;
    j["schema_version"] = kSchemaVersion;
    switch (res.status) {
        case LagrangianStatus::Infeasible:
            j["value"] = "inf";
            j["status"] = "infeasible";
            break;
        case LagrangianStatus::BoundaryAttainedAtInfinity:
            j["value"] = res.value;
            j["status"] = "boundary_attained_at_infinity";
            break;
        default:
            j["value"] = res.value;
            j["status"] = "finite";
    }
    j["theta_star"] = res.theta_star ? json(*res.theta_star) : json(nullptr);
    j["q_star"] = res.q_star ? json(*res.q_star) : json(nullptr);
    j["gap"] = res.duality_gap;
    emit(out, j.dump(2) + "\n");
    return kExitOk;
}

int run_qpot(const std::string& file, const std::string& from_spec, const std::string& to_spec,
             const std::string& domain_spec, std::size_t segments, std::size_t restarts,
             std::uint64_t seed, const std::string& out, const std::string& path_out) {
    Network net = load_network(file);
    Concentration from{parse_named_vector(net, from_spec)};
    Concentration to{parse_named_vector(net, to_spec)};
    DomainSpec domain = parse_domain(net, domain_spec);
    QPotOptions opts;
    opts.segments = segments;
    opts.restarts = restarts;
    opts.seed = seed;
    QPotResult res = quasipotential(net, from, to, domain, opts);

    json j;
    j["schema_version"] = kSchemaVersion;
    j["value"] = res.value;
    j["converged"] = res.converged;
    j["restarts"] = res.restarts_used;
    j["seed"] = seed;
    emit(out, j.dump(2) + "\n");

    if (!path_out.empty()) {
        std::ostringstream csv;
        csv << csv_header(net, "t");
        csv.precision(12);
        double t = 0.0;
        for (std::size_t i = 0; i < res.path.nodes.size(); ++i) {
            csv << t;
            for (double v : res.path.nodes[i].values) csv << "," << v;
            csv << "\n";
            if (i < res.path.durations.size()) t += res.path.durations[i];
        }
        atomic_write(path_out, csv.str());
    }
    return kExitOk;
}

int run_exit(const std::string& file, const std::string& grid_spec, const std::string& x0_spec,
             const std::string& domain_spec, std::size_t replicas, double t_max,
             std::uint64_t seed, bool predict, const std::string& csv_out,
             const std::string& json_out) {
    Network net = load_network(file);
    Concentration x0{parse_named_vector(net, x0_spec)};
    DomainSpec domain = parse_domain(net, domain_spec);
    std::vector<double> grid = parse_grid(grid_spec);

    EnsembleExitResult res = ensemble_exit(net, grid, x0, domain, replicas, t_max, seed);

    std::ostringstream csv;
    csv << "v,mean_tau,log_mean_over_v,ci_lo,ci_hi,censored,replicas\n";
    csv.precision(12);
    for (const auto& s : res.per_volume)
        csv << s.volume << "," << s.mean_tau << "," << s.log_mean_over_v << "," << s.ci_lo
            << "," << s.ci_hi << "," << s.censored << "," << s.replicas << "\n";
    emit(csv_out, csv.str());

    json j;
    j["schema_version"] = kSchemaVersion;
    j["seed"] = seed;
    j["fit_refused"] = res.fit_refused;
    j["slope"] = res.slope ? json(*res.slope) : json(nullptr);
    if (predict) {
        QPotOptions opts;
        opts.seed = seed;
        j["predicted_exponent"] = exit_exponent(net, domain, x0, opts);
    }
    emit(json_out, j.dump(2) + "\n");
    return res.fit_refused ? kExitCensoring : kExitOk;
}

int run_attractors(const std::string& file, const std::string& box_spec, std::size_t starts,
                   std::uint64_t seed, const std::string& out) {
    Network net = load_network(file);
    Box box = parse_box(net, box_spec);
    auto attractors = find_attractors(net, box, starts, seed);
    json j;
    j["schema_version"] = kSchemaVersion;
    j["seed"] = seed;
    j["attractors"] = json::array();
    for (const auto& a : attractors) {
        json entry;
        entry["point"] = vec_json(a.point.values);
        entry["stable"] = a.stable;
        j["attractors"].push_back(entry);
    }
    emit(out, j.dump(2) + "\n");
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reaction-network large-deviation toolkit"};
    app.require_subcommand(1);

    std::string file, out, x0_spec, x_spec, xi_spec, from_spec, to_spec, domain_spec;
    std::string box_spec, grid_spec, out_dir, path_out, json_out;
    double t_end = 10.0, tol = 1e-8, volume = 100.0, t_max = 1e6;
    std::size_t replicas = 100, segments = 64, restarts = 4, starts = 64;
    std::uint64_t seed = 0;
    bool predict = false;

    auto* check = app.add_subcommand("check", "Certificate report for a network file");
    check->add_option("file", file)->required();
    check->add_option("--out", out);

    auto* ode = app.add_subcommand("ode", "Integrate the mass-action ODE");
    ode->add_option("file", file)->required();
    ode->add_option("--x0", x0_spec)->required();
    ode->add_option("--t-end", t_end)->required();
    ode->add_option("--tol", tol);
    ode->add_option("--out", out);

    auto* sim = app.add_subcommand("simulate", "Gillespie trajectories at fixed volume");
    sim->add_option("file", file)->required();
    sim->add_option("--volume", volume)->required();
    sim->add_option("--x0", x0_spec)->required();
    sim->add_option("--t-end", t_end)->required();
    sim->add_option("--replicas", replicas);
    sim->add_option("--seed", seed)->required();
    sim->add_option("--out-dir", out_dir)->required();

    auto* lag = app.add_subcommand("lagrangian", "Evaluate L(lambda(x), xi)");
    lag->add_option("file", file)->required();
    lag->add_option("--x", x_spec)->required();
    lag->add_option("--xi", xi_spec)->required();
    lag->add_option("--out", out);

    auto* qpot = app.add_subcommand("qpot", "Quasi-potential between two points");
    qpot->add_option("file", file)->required();
    qpot->add_option("--from", from_spec)->required();
    qpot->add_option("--to", to_spec)->required();
    qpot->add_option("--domain", domain_spec);
    qpot->add_option("--segments", segments);
    qpot->add_option("--restarts", restarts);
    qpot->add_option("--seed", seed);
    qpot->add_option("--out", out);
    qpot->add_option("--path-out", path_out);

    auto* exit_cmd = app.add_subcommand("exit", "Exit-time ensembles over a volume grid");
    exit_cmd->add_option("file", file)->required();
    exit_cmd->add_option("--volume-grid", grid_spec)->required();
    exit_cmd->add_option("--x0", x0_spec)->required();
    exit_cmd->add_option("--domain", domain_spec)->required();
    exit_cmd->add_option("--replicas", replicas);
    exit_cmd->add_option("--t-max", t_max);
    exit_cmd->add_option("--seed", seed)->required();
    exit_cmd->add_flag("--predict", predict);
    exit_cmd->add_option("--csv-out", out);
    exit_cmd->add_option("--json-out", json_out);

    auto* attr = app.add_subcommand("attractors", "Fixed points of the mass-action ODE");
    attr->add_option("file", file)->required();
    attr->add_option("--box", box_spec);
    attr->add_option("--starts", starts);
    attr->add_option("--seed", seed);
    attr->add_option("--out", out);

    CLI11_PARSE(app, argc, argv);

    try {
        if (check->parsed()) return run_check(file, out);
        if (ode->parsed()) return run_ode(file, x0_spec, t_end, tol, out);
        if (sim->parsed())
            return run_simulate(file, volume, x0_spec, t_end, replicas, seed, out_dir);
        if (lag->parsed()) return run_lagrangian(file, x_spec, xi_spec, out);
        if (qpot->parsed())
            return run_qpot(file, from_spec, to_spec, domain_spec, segments, restarts, seed,
                            out, path_out);
        if (exit_cmd->parsed())
            return run_exit(file, grid_spec, x0_spec, domain_spec, replicas, t_max, seed,
                            predict, out, json_out);
        if (attr->parsed()) return run_attractors(file, box_spec, starts, seed, out);
    } catch (const CliError& e) {
        std::cerr << e.what() << "\n";
        return e.code;
    } catch (const BlowupDetected& e) {
        std::cerr << e.what() << "\n";
        return kExitBlowup;
    } catch (const EventCap& e) {
        std::cerr << e.what() << "\n";
        return kExitEventCap;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitParse;
    }
    return kExitOk;
}

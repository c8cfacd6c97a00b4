#include "covel/scenario.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

#include "covel/expr.hpp"

namespace covel {

namespace {

std::vector<std::string> coordinateSymbols(int n) {
    std::vector<std::string> s;
    for (int i = 1; i <= n; ++i) s.push_back("q" + std::to_string(i));
    return s;
}

std::vector<std::string> phaseSymbols(int n) {
    std::vector<std::string> s = coordinateSymbols(n);
    for (int i = 1; i <= n; ++i) s.push_back("qd" + std::to_string(i));
    return s;
}

// Parse "prefix.K.I.J" 1-based index triples.
std::array<int, 3> parseIndexTriple(const std::string& key, const std::string& prefix, int n) {
    std::array<int, 3> idx{};
    std::istringstream in(key.substr(prefix.size()));
    char dot1 = 0, dot2 = 0;
    if (!(in >> idx[0] >> dot1 >> idx[1] >> dot2 >> idx[2]) || dot1 != '.' || dot2 != '.' || !in.eof())
        throw ConfigError("bad index key: " + key);
    for (int& v : idx) {
        if (v < 1 || v > n) throw ConfigError("index out of range in key: " + key);
        --v;
    }
    return idx;
}

Vec readVector(const ConfigMap& cfg, const std::string& prefix, int n) {
    Vec v(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) v[static_cast<std::size_t>(i - 1)] = cfg.getDouble(prefix + std::to_string(i));
    return v;
}

} // namespace

ChristoffelField buildConnection(const ConfigMap& cfg, const ChartPtr& chart) {
    const std::string kind = cfg.getString("connection.kind", "flat");
    const int n = chart->dim;
    if (kind == "flat") return catalogConnection("flat", chart);
    if (kind == "levi-civita") return catalogConnection("levi-civita:" + cfg.getString("connection.metric"), chart);
    if (kind == "contorsion") {
        auto keys = cfg.keysWithPrefix("connection.contorsion.");
        if (keys.empty()) return catalogConnection("contorsion:" + cfg.getString("connection.metric"), chart);
        std::map<std::array<int, 3>, double> entries;
        for (const auto& key : keys)
            entries[parseIndexTriple(key, "connection.contorsion.", n)] = cfg.getDouble(key);
        for (const auto& [idx, value] : entries) {
            std::array<int, 3> swapped{idx[0], idx[2], idx[1]};
            auto it = entries.find(swapped);
            if (it == entries.end() || it->second != -value)
                throw ConfigError("connection.contorsion entries must be antisymmetric in the lower indices");
        }
        ChristoffelField lc = leviCivita(catalogMetric(cfg.getString("connection.metric"), chart));
        ChristoffelField k = constantChristoffel(chart, entries);
        auto gammaLc = lc.gamma;
        auto gammaK = k.gamma;
        return {chart, [gammaLc, gammaK, n](std::span<const double> q) {
                    Ten3 a = gammaLc(q);
                    Ten3 b = gammaK(q);
                    Ten3 r(n);
                    for (int kk = 0; kk < n; ++kk)
                        for (int i = 0; i < n; ++i)
                            for (int j = 0; j < n; ++j) r(kk, i, j) = a(kk, i, j) + b(kk, i, j);
                    return r;
                }};
    }
    if (kind == "constant-torsion") {
        auto keys = cfg.keysWithPrefix("connection.gamma.");
        if (keys.empty()) return catalogConnection("constant-torsion", chart);
        std::map<std::array<int, 3>, double> entries;
        for (const auto& key : keys) entries[parseIndexTriple(key, "connection.gamma.", n)] = cfg.getDouble(key);
        return constantChristoffel(chart, entries);
    }
    if (kind == "expr") {
        auto keys = cfg.keysWithPrefix("connection.gamma.");
        if (keys.empty()) throw ConfigError("connection.kind = expr requires connection.gamma.K.I.J entries");
        auto symbols = coordinateSymbols(n);
        auto entries = std::make_shared<std::vector<std::pair<std::array<int, 3>, ExprAst>>>();
        for (const auto& key : keys)
            entries->emplace_back(parseIndexTriple(key, "connection.gamma.", n),
                                  parseExpression(cfg.getString(key), symbols));
        return {chart, [entries, n](std::span<const double> q) {
                    Ten3 g(n);
                    for (const auto& [idx, ast] : *entries) g(idx[0], idx[1], idx[2]) = evaluateAst(ast, q);
                    return g;
                }};
    }
    throw ConfigError("unknown connection.kind: " + kind);
}

LagrangianField buildLagrangian(const ConfigMap& cfg, const ChartPtr& chart) {
    if (cfg.has("lagrangian.expr")) {
        auto ast = std::make_shared<ExprAst>(parseExpression(cfg.getString("lagrangian.expr"), phaseSymbols(chart->dim)));
        return {chart, SmoothMap(2 * chart->dim, 1, [ast]<TowerScalar T>(std::span<const T> x) {
                    return std::vector<T>{evaluateAst(*ast, x)};
                })};
    }
    std::string key = cfg.getString("lagrangian.name");
    if (key == "metric-kinetic") key += ":" + cfg.getString("lagrangian.metric");
    return catalogLagrangian(key, chart);
}

namespace {

Curve curveFromExprs(const ConfigMap& cfg, const std::string& prefix, int n) {
    std::vector<std::string> texts;
    for (int i = 1; i <= n; ++i) texts.push_back(cfg.getString(prefix + std::to_string(i)));
    return Curve(exprsToSmoothMap(std::move(texts), {"t"}));
}

std::string lagrangianLabel(const ConfigMap& cfg) {
    return cfg.has("lagrangian.expr") ? cfg.getString("lagrangian.expr") : cfg.getString("lagrangian.name");
}

Json vecJson(std::span<const double> v) {
    Json arr = Json::array();
    for (double x : v) arr.push(Json::number(x));
    return arr;
}

// What a task produces before the common wrapper adds scenario/runtime.
struct TaskOutcome {
    Json parameters = Json::object();
    Json metrics = Json::object();
    bool pass = false;
    std::optional<std::string> csv;
};

TaskOutcome runCheckIdentity(const ScenarioConfig& cfg) {
    auto chart = catalogChart(cfg.raw.getString("manifold.name"));
    ChristoffelField conn = buildConnection(cfg.raw, chart);
    LagrangianField lag = buildLagrangian(cfg.raw, chart);
    const long long jets = cfg.raw.getInt("numeric.jets", 1000);
    const std::uint64_t seed = static_cast<std::uint64_t>(cfg.raw.getInt("numeric.seed", 0));
    const double tol = cfg.raw.getDouble("numeric.tolerance", 1e-10);

    SplitMix64 rng(seed);
    double maxAbs = 0.0, maxRel = 0.0;
    for (long long s = 0; s < jets; ++s) {
        JetPoint jet = randomJet(chart, rng);
        Vec covariant = covariantELResidual(lag, conn, jet).r;
        Vec coordinate = coordinateELResidual(lag, jet).r;
        for (std::size_t i = 0; i < covariant.size(); ++i) {
            const double dev = std::abs(covariant[i] - coordinate[i]);
            maxAbs = std::max(maxAbs, dev);
            maxRel = std::max(maxRel, dev / std::max({1.0, std::abs(covariant[i]), std::abs(coordinate[i])}));
        }
    }

    TaskOutcome out;
    out.parameters.add("manifold", Json::string(chart->name));
    out.parameters.add("connection", Json::string(cfg.raw.getString("connection.kind", "flat")));
    out.parameters.add("lagrangian", Json::string(lagrangianLabel(cfg.raw)));
    out.parameters.add("jets", Json::integer(jets));
    out.parameters.add("seed", Json::integer(static_cast<long long>(seed)));
    out.parameters.add("tolerance", Json::number(tol));
    out.metrics.add("max_abs_dev", Json::number(maxAbs));
    out.metrics.add("max_rel_dev", Json::number(maxRel));
    out.metrics.add("samples", Json::integer(jets));
    out.pass = maxRel <= tol;
    return out;
}

TaskOutcome runSimulate(const ScenarioConfig& cfg) {
    auto chart = catalogChart(cfg.raw.getString("manifold.name"));
    LagrangianField lag = buildLagrangian(cfg.raw, chart);
    const double t0 = cfg.raw.getDouble("numeric.t0", 0.0);
    const double t1 = cfg.raw.getDouble("numeric.t1", 10.0);
    const double step = cfg.raw.getDouble("numeric.step", 1e-3);
    const double tol = cfg.raw.getDouble("numeric.tolerance", 1e-6);
    VelocityPhasePoint p0{chart, readVector(cfg.raw, "simulate.q0.", chart->dim),
                          readVector(cfg.raw, "simulate.qd0.", chart->dim)};

    auto trajectory = simulate(lag, p0, t0, t1, step);
    const double e0 = energy(lag, p0);
    double drift = 0.0;
    for (const auto& s : trajectory)
        drift = std::max(drift, std::abs(energy(lag, {chart, s.q, s.qdot}) - e0));

    TaskOutcome out;
    out.parameters.add("manifold", Json::string(chart->name));
    out.parameters.add("lagrangian", Json::string(lagrangianLabel(cfg.raw)));
    out.parameters.add("t0", Json::number(t0));
    out.parameters.add("t1", Json::number(t1));
    out.parameters.add("step", Json::number(step));
    out.parameters.add("tolerance", Json::number(tol));
    out.metrics.add("final_q", vecJson(trajectory.back().q));
    out.metrics.add("final_qd", vecJson(trajectory.back().qdot));
    out.metrics.add("energy_initial", Json::number(e0));
    out.metrics.add("energy_drift", Json::number(drift));
    out.metrics.add("samples", Json::integer(static_cast<long long>(trajectory.size())));
    out.pass = drift <= tol;
    out.csv = trajectoryCsv(trajectory, chart->dim);
    return out;
}

TaskOutcome runTransport(const ScenarioConfig& cfg) {
    auto chart = catalogChart(cfg.raw.getString("manifold.name"));
    ChristoffelField conn = buildConnection(cfg.raw, chart);
    const int steps = static_cast<int>(cfg.raw.getInt("numeric.steps", kDefaultTransportSteps));
    const std::string pathKind = cfg.raw.getString("transport.path", "expr");

    std::optional<Curve> path;
    std::optional<MetricField> frameMetric;
    if (pathKind == "latitude") {
        if (chart->name != "s2-angles") throw ConfigError("transport.path = latitude requires manifold s2-angles");
        const double theta0 = cfg.raw.getDouble("transport.theta0");
        path = Curve(2, [theta0]<TowerScalar T>(std::span<const T> t) {
            return std::vector<T>{T(theta0), 2.0 * std::numbers::pi * t[0]};
        });
        frameMetric = catalogMetric("round-sphere", chart);
    } else if (pathKind == "expr") {
        path = curveFromExprs(cfg.raw, "transport.path.", chart->dim);
        if (cfg.raw.has("transport.metric")) frameMetric = catalogMetric(cfg.raw.getString("transport.metric"), chart);
    } else {
        throw ConfigError("unknown transport.path: " + pathKind);
    }

    Vec v0 = readVector(cfg.raw, "transport.v0.", chart->dim);
    auto trace = parallelTransportTrace(conn, *path, v0, steps);
    Vec closure = trace.back().q - trace.front().q;
    const bool closed = normInf(closure) < 1e-9;

    std::optional<double> deficit;
    if (closed && chart->dim == 2 && frameMetric)
        deficit = holonomyAroundLoop(conn, *frameMetric, *path, v0, steps).deficit;

    TaskOutcome out;
    out.parameters.add("manifold", Json::string(chart->name));
    out.parameters.add("connection", Json::string(cfg.raw.getString("connection.kind", "flat")));
    out.parameters.add("path", Json::string(pathKind));
    out.parameters.add("steps", Json::integer(steps));
    out.parameters.add("v0", vecJson(v0));
    out.metrics.add("v_end", vecJson(trace.back().v));
    out.metrics.add("closed", Json::boolean(closed));
    out.metrics.add("holonomy_deficit", deficit ? Json::number(*deficit) : Json());

    out.pass = true;
    if (cfg.raw.has("transport.expected_deficit")) {
        const double expected = cfg.raw.getDouble("transport.expected_deficit");
        const double tol = cfg.raw.getDouble("numeric.tolerance", 1e-6);
        out.pass = deficit && std::abs(*deficit - expected) <= tol;
        out.metrics.add("deficit_error", deficit ? Json::number(std::abs(*deficit - expected)) : Json());
    }
    return out;
}

TaskOutcome runVariationCheck(const ScenarioConfig& cfg) {
    auto chart = catalogChart(cfg.raw.getString("manifold.name"));
    LagrangianField lag = buildLagrangian(cfg.raw, chart);
    const double t0 = cfg.raw.getDouble("numeric.t0", 0.0);
    const double t1 = cfg.raw.getDouble("numeric.t1", 1.0);
    const double eps = cfg.raw.getDouble("numeric.eps", 1e-4);
    const int samples = static_cast<int>(cfg.raw.getInt("numeric.samples", 201));
    Curve path = curveFromExprs(cfg.raw, "variation.path.", chart->dim);
    VariationField delta{curveFromExprs(cfg.raw, "variation.delta.", chart->dim)};

    auto [lhs, rhs] = variationCheck(lag, path, delta, eps, samples, t0, t1);
    const double tol = cfg.raw.getDouble("numeric.tolerance", std::max(1e-6, 10.0 * eps * eps));

    TaskOutcome out;
    out.parameters.add("manifold", Json::string(chart->name));
    out.parameters.add("lagrangian", Json::string(lagrangianLabel(cfg.raw)));
    out.parameters.add("eps", Json::number(eps));
    out.parameters.add("samples", Json::integer(samples));
    out.parameters.add("tolerance", Json::number(tol));
    out.metrics.add("lhs", Json::number(lhs));
    out.metrics.add("rhs", Json::number(rhs));
    out.metrics.add("deviation", Json::number(std::abs(lhs - rhs)));
    out.pass = std::abs(lhs - rhs) <= tol;
    return out;
}

TaskOutcome runReduce(const ScenarioConfig& cfg) {
    const std::string groupName = cfg.raw.getString("reduce.group", "circle");
    GroupKind group;
    if (groupName == "circle") group = GroupKind::Circle;
    else if (groupName == "line") group = GroupKind::Line;
    else throw ConfigError("unknown reduce.group: " + groupName);

    KaluzaKleinSetup kk = kaluzaKleinUniformField(group);
    auto total = kk.total.chart;
    ChristoffelField cBase = buildConnection(cfg.raw, kk.data.baseChart);

    const double t0 = cfg.raw.getDouble("numeric.t0", 0.0);
    const double t1 = cfg.raw.getDouble("numeric.t1", 10.0);
    const double step = cfg.raw.getDouble("numeric.step", 1e-3);
    const double tol = cfg.raw.getDouble("numeric.tolerance", 1e-6);
    const double lpTol = cfg.raw.getDouble("reduce.lp_tolerance", 1e-7);

    Vec q0 = readVector(cfg.raw, "reduce.x0.", 2);
    q0.push_back(cfg.raw.getDouble("reduce.theta0", 0.0));
    Vec qd0 = readVector(cfg.raw, "reduce.xd0.", 2);
    qd0.push_back(cfg.raw.getDouble("reduce.thetad0", 1.0));

    auto trajectory = simulate(kk.total, {total, q0, qd0}, t0, t1, step);

    // Reduce the samples; the LP residual must vanish along solutions and v
    // must be conserved.
    double maxLp = 0.0, vDrift = 0.0, v0 = 0.0;
    const std::size_t stride = std::max<std::size_t>(1, trajectory.size() / 200);
    std::vector<TrajectorySample> baseTrajectory;
    baseTrajectory.reserve(trajectory.size());
    std::vector<double> vSamples;
    vSamples.reserve(trajectory.size());
    for (std::size_t i = 0; i < trajectory.size(); ++i) {
        const auto& s = trajectory[i];
        ReducedState rs = reduceState(kk.data, s.q, s.qdot);
        baseTrajectory.push_back({s.t, rs.x, rs.xdot});
        vSamples.push_back(rs.v);
        if (i == 0) v0 = rs.v;
        vDrift = std::max(vDrift, std::abs(rs.v - v0));
        if (i % stride == 0) {
            Vec acc = lagrangianAcceleration(kk.total, s.q, s.qdot);
            ReducedJet jet = reduceJet(kk.data, JetPoint{total, s.q, s.qdot, acc});
            Vec lp = horizontalLPResidual(kk.reduced, cBase, kk.data, jet).r;
            maxLp = std::max(maxLp, normInf(lp));
        }
    }

    // Reconstruction against the simulated group coordinate.
    const double h = trajectory[1].t - trajectory[0].t;
    auto vOf = [&](double t) {
        const double u = (t - t0) / h;
        const std::size_t i = std::min(static_cast<std::size_t>(std::max(0.0, u + 0.5)), vSamples.size() - 1);
        return vSamples[i];
    };
    auto thetas = reconstructState(kk.data, baseTrajectory, vOf, q0.back());
    double thetaErr = 0.0;
    for (std::size_t i = 0; i < thetas.size(); ++i)
        thetaErr = std::max(thetaErr, std::abs(thetas[i].second - trajectory[i].q.back()));

    TaskOutcome out;
    out.parameters.add("group", Json::string(groupName));
    out.parameters.add("connection", Json::string(cfg.raw.getString("connection.kind", "flat")));
    out.parameters.add("t0", Json::number(t0));
    out.parameters.add("t1", Json::number(t1));
    out.parameters.add("step", Json::number(step));
    out.parameters.add("tolerance", Json::number(tol));
    out.parameters.add("lp_tolerance", Json::number(lpTol));
    out.metrics.add("max_lp_residual", Json::number(maxLp));
    out.metrics.add("v_drift", Json::number(vDrift));
    out.metrics.add("theta_reconstruction_error", Json::number(thetaErr));
    out.metrics.add("samples", Json::integer(static_cast<long long>(trajectory.size())));
    out.pass = maxLp <= lpTol && thetaErr <= tol;
    out.csv = trajectoryCsv(trajectory, total->dim);
    return out;
}

} // namespace

ScenarioResult runScenario(const ScenarioConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    TaskOutcome out;
    if (cfg.task == "check-identity") out = runCheckIdentity(cfg);
    else if (cfg.task == "simulate") out = runSimulate(cfg);
    else if (cfg.task == "transport") out = runTransport(cfg);
    else if (cfg.task == "variation-check") out = runVariationCheck(cfg);
    else if (cfg.task == "reduce") out = runReduce(cfg);
    else throw ConfigError("unknown task: " + cfg.task);

    Json report = Json::object();
    report.add("scenario", Json::string(cfg.name));
    report.add("task", Json::string(cfg.task));
    report.add("parameters", std::move(out.parameters));
    report.add("metrics", std::move(out.metrics));
    report.add("pass", Json::boolean(out.pass));
    // Wall-clock timing is opt-in: the default report must stay
    // byte-identical across reruns of the same config + seed.
    if (cfg.raw.getString("output.include_runtime", "false") == "true") {
        const auto ms =
            std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
        report.add("runtime_ms", Json::integer(ms));
    } else {
        report.add("runtime_ms", Json());
    }

    ScenarioResult res;
    res.report = std::move(report);
    res.pass = out.pass;
    res.trajectoryCsvContent = std::move(out.csv);
    return res;
}

std::string describeCatalog() {
    std::ostringstream out;
    out << "charts:\n";
    for (const auto& key : catalogChartKeys()) out << "  " << key << "\n";
    for (const std::string chartKey : {"r2", "s2-angles", "t2", "r3"}) {
        auto chart = catalogChart(chartKey);
        out << "connections on " << chartKey << ":\n";
        for (const auto& k : catalogConnectionKeys(chart)) out << "  " << k << "\n";
        out << "lagrangians on " << chartKey << ":\n";
        for (const auto& k : catalogLagrangianKeys(chart)) out << "  " << k << "\n";
    }
    out << "tasks:\n  check-identity\n  simulate\n  transport\n  reduce\n  variation-check\n";
    return out.str();
}

} // namespace covel

#include "covel/catalog.hpp"

#include <cmath>

namespace covel {

namespace {

bool startsWith(const std::string& s, const std::string& prefix) {
    return s.rfind(prefix, 0) == 0;
}

bool isStereoChart(const ChartPtr& chart) {
    return chart->name == "s2-stereo-north" || chart->name == "s2-stereo-south";
}

MetricField euclideanMetric(const ChartPtr& chart) {
    const int n = chart->dim;
    return {chart, SmoothMap(n, n * n, [n]<TowerScalar T>(std::span<const T>) {
                std::vector<T> g(static_cast<std::size_t>(n) * n, T(0.0));
                for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i * n + i)] = T(1.0);
                return g;
            })};
}

MetricField roundSphereMetric(const ChartPtr& chart) {
    if (chart->name == "s2-angles") {
        return {chart, SmoothMap(2, 4, []<TowerScalar T>(std::span<const T> q) {
                    using std::sin;
                    T s = sin(q[0]);
                    return std::vector<T>{T(1.0), T(0.0), T(0.0), s * s};
                })};
    }
    if (isStereoChart(chart)) {
        return {chart, SmoothMap(2, 4, []<TowerScalar T>(std::span<const T> q) {
                    T c = 1.0 + q[0] * q[0] + q[1] * q[1];
                    T f = 4.0 / (c * c);
                    return std::vector<T>{f, T(0.0), T(0.0), f};
                })};
    }
    throw ConfigError("round-sphere metric is only defined on the sphere charts");
}

MetricField torusEmbeddedMetric(const ChartPtr& chart) {
    if (chart->name != "t2") throw ConfigError("torus-embedded metric is only defined on t2");
    return {chart, SmoothMap(2, 4, []<TowerScalar T>(std::span<const T> q) {
                using std::cos;
                T w = 2.0 + cos(q[0]);
                return std::vector<T>{T(1.0), T(0.0), T(0.0), w * w};
            })};
}

MetricField rank1Metric(const ChartPtr& chart) {
    const int n = chart->dim;
    return {chart, SmoothMap(n, n * n, [n]<TowerScalar T>(std::span<const T> q) {
                std::vector<T> g(static_cast<std::size_t>(n) * n, T(0.0));
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) {
                        T v = q[static_cast<std::size_t>(i)] * q[static_cast<std::size_t>(j)];
                        if (i == j) v = v + 1.0;
                        g[static_cast<std::size_t>(i * n + j)] = v;
                    }
                return g;
            })};
}

std::map<std::array<int, 3>, double> defaultTorsionEntries(int n) {
    std::map<std::array<int, 3>, double> entries;
    if (n >= 2) entries[{0, 1, 0}] = 1.0; // Gamma^1_{21} = 1
    if (n >= 3) {
        entries[{2, 0, 2}] = 0.5; // Gamma^3_{13}
        entries[{1, 2, 0}] = -0.3;
    }
    return entries;
}

std::map<std::array<int, 3>, double> defaultContorsionEntries(int n) {
    // Antisymmetric in the lower pair, so the added torsion is 2K.
    std::map<std::array<int, 3>, double> k;
    if (n >= 2) {
        k[{0, 0, 1}] = 0.4;
        k[{0, 1, 0}] = -0.4;
        k[{1, 0, 1}] = -0.25;
        k[{1, 1, 0}] = 0.25;
    }
    if (n >= 3) {
        k[{2, 1, 2}] = 0.3;
        k[{2, 2, 1}] = -0.3;
    }
    return k;
}

LagrangianField freeParticle(const ChartPtr& chart) {
    const int n = chart->dim;
    return {chart, SmoothMap(2 * n, 1, [n]<TowerScalar T>(std::span<const T> x) {
                T s(0.0);
                for (int i = 0; i < n; ++i) s = s + x[static_cast<std::size_t>(n + i)] * x[static_cast<std::size_t>(n + i)];
                return std::vector<T>{0.5 * s};
            })};
}

LagrangianField harmonicOscillator(const ChartPtr& chart) {
    const int n = chart->dim;
    return {chart, SmoothMap(2 * n, 1, [n]<TowerScalar T>(std::span<const T> x) {
                T kin(0.0), pot(0.0);
                for (int i = 0; i < n; ++i) {
                    kin = kin + x[static_cast<std::size_t>(n + i)] * x[static_cast<std::size_t>(n + i)];
                    pot = pot + x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
                }
                return std::vector<T>{0.5 * kin - 0.5 * pot};
            })};
}

LagrangianField metricKinetic(const ChartPtr& chart, const MetricField& metric) {
    const int n = chart->dim;
    SmoothMap g = metric.g;
    return {chart, SmoothMap(2 * n, 1, [g, n]<TowerScalar T>(std::span<const T> x) {
                std::vector<T> gm = g.eval<T>(x.first(static_cast<std::size_t>(n)));
                T s(0.0);
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j)
                        s = s + gm[static_cast<std::size_t>(i * n + j)] * x[static_cast<std::size_t>(n + i)] *
                                    x[static_cast<std::size_t>(n + j)];
                return std::vector<T>{0.5 * s};
            })};
}

LagrangianField kineticPolynomialPotential(const ChartPtr& chart) {
    const int n = chart->dim;
    return {chart, SmoothMap(2 * n, 1, [n]<TowerScalar T>(std::span<const T> x) {
                T kin(0.0), pot(0.0);
                for (int i = 0; i < n; ++i) {
                    const T& qi = x[static_cast<std::size_t>(i)];
                    const T& vi = x[static_cast<std::size_t>(n + i)];
                    kin = kin + vi * vi;
                    pot = pot + 0.5 * qi * qi + 0.25 * qi * qi * qi * qi;
                }
                return std::vector<T>{0.5 * kin - pot};
            })};
}

LagrangianField magneticCoupling(const ChartPtr& chart) {
    const int n = chart->dim;
    return {chart, SmoothMap(2 * n, 1, [n]<TowerScalar T>(std::span<const T> x) {
                T kin(0.0), pot(0.0);
                for (int i = 0; i < n; ++i) {
                    kin = kin + x[static_cast<std::size_t>(n + i)] * x[static_cast<std::size_t>(n + i)];
                    pot = pot + x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
                }
                T coupling(0.0);
                if (n >= 2)
                    coupling = 0.5 * (x[static_cast<std::size_t>(0)] * x[static_cast<std::size_t>(n + 1)] -
                                      x[static_cast<std::size_t>(1)] * x[static_cast<std::size_t>(n)]);
                return std::vector<T>{0.5 * kin + coupling - 0.5 * pot};
            })};
}

} // namespace

MetricField catalogMetric(const std::string& key, const ChartPtr& chart) {
    if (key == "euclidean") return euclideanMetric(chart);
    if (key == "round-sphere") return roundSphereMetric(chart);
    if (key == "torus-embedded") return torusEmbeddedMetric(chart);
    if (key == "rank1") return rank1Metric(chart);
    throw ConfigError("unknown metric key: " + key);
}

ChristoffelField constantChristoffel(const ChartPtr& chart,
                                     const std::map<std::array<int, 3>, double>& entries) {
    const int n = chart->dim;
    Ten3 g(n);
    for (const auto& [idx, value] : entries) {
        const auto [k, i, j] = idx;
        if (k < 0 || k >= n || i < 0 || i >= n || j < 0 || j >= n)
            throw ConfigError("constantChristoffel: index out of range");
        g(k, i, j) = value;
    }
    return {chart, [g](std::span<const double>) { return g; }};
}

ChristoffelField catalogConnection(const std::string& key, const ChartPtr& chart) {
    const int n = chart->dim;
    if (key == "flat") {
        return {chart, [n](std::span<const double>) { return Ten3(n); }};
    }
    if (key == "constant-torsion") return constantChristoffel(chart, defaultTorsionEntries(n));
    if (startsWith(key, "levi-civita:"))
        return leviCivita(catalogMetric(key.substr(std::string("levi-civita:").size()), chart));
    if (startsWith(key, "contorsion:")) {
        ChristoffelField lc = leviCivita(catalogMetric(key.substr(std::string("contorsion:").size()), chart));
        ChristoffelField k = constantChristoffel(chart, defaultContorsionEntries(n));
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
    throw ConfigError("unknown connection key: " + key);
}

bool catalogConnectionHasTorsion(const std::string& key) {
    return key == "constant-torsion" || startsWith(key, "contorsion:");
}

LagrangianField catalogLagrangian(const std::string& key, const ChartPtr& chart) {
    if (key == "free-particle") return freeParticle(chart);
    if (key == "harmonic-oscillator") return harmonicOscillator(chart);
    if (startsWith(key, "metric-kinetic:"))
        return metricKinetic(chart, catalogMetric(key.substr(std::string("metric-kinetic:").size()), chart));
    if (key == "kinetic-potential") return kineticPolynomialPotential(chart);
    if (key == "magnetic") return magneticCoupling(chart);
    throw ConfigError("unknown lagrangian key: " + key);
}

std::vector<std::string> catalogMetricKeys(const ChartPtr& chart) {
    std::vector<std::string> keys{"euclidean"};
    if (chart->name == "s2-angles" || isStereoChart(chart)) keys.push_back("round-sphere");
    if (chart->name == "t2") keys.push_back("torus-embedded");
    if (chart->name == "r1" || chart->name == "r2" || chart->name == "r3") keys.push_back("rank1");
    return keys;
}

std::vector<std::string> catalogConnectionKeys(const ChartPtr& chart) {
    std::vector<std::string> keys{"flat", "constant-torsion"};
    for (const auto& m : catalogMetricKeys(chart)) {
        if (m == "euclidean") continue; // its Levi-Civita duplicates "flat"
        keys.push_back("levi-civita:" + m);
        keys.push_back("contorsion:" + m);
    }
    if (keys.size() < 4) {
        keys.push_back("levi-civita:euclidean");
        keys.push_back("contorsion:euclidean");
    }
    return keys;
}

std::vector<std::string> catalogLagrangianKeys(const ChartPtr& chart) {
    std::vector<std::string> keys{"free-particle", "harmonic-oscillator", "kinetic-potential", "magnetic"};
    for (const auto& m : catalogMetricKeys(chart))
        if (m != "euclidean") keys.push_back("metric-kinetic:" + m);
    return keys;
}

std::vector<IdentityCase> identityCrossProduct() {
    std::vector<IdentityCase> cases;
    for (const std::string chartKey : {"r2", "s2-angles", "t2"}) {
        auto chart = catalogChart(chartKey);
        for (const auto& conn : catalogConnectionKeys(chart))
            for (const auto& lag : catalogLagrangianKeys(chart)) cases.push_back({chartKey, conn, lag});
    }
    return cases;
}

KaluzaKleinSetup kaluzaKleinUniformField(GroupKind group) {
    auto base = catalogChart("r2");
    AbelianPrincipalData data{base, group, SmoothMap(2, 2, []<TowerScalar T>(std::span<const T> x) {
                                  return std::vector<T>{-0.5 * x[1], 0.5 * x[0]};
                              })};
    auto total = totalChart(data);
    SmoothMap potential = data.potential;
    LagrangianField L{total, SmoothMap(6, 1, [potential]<TowerScalar T>(std::span<const T> q) {
                          auto x = q.first(2);
                          std::vector<T> A = potential.eval<T>(x);
                          T v = q[5] + A[0] * q[3] + A[1] * q[4];
                          return std::vector<T>{0.5 * (q[3] * q[3] + q[4] * q[4]) + 0.5 * v * v};
                      })};
    ReducedLagrangian reduced = reduceLagrangian(L, data);
    return {std::move(data), std::move(L), std::move(reduced)};
}

JetPoint randomJet(const ChartPtr& chart, SplitMix64& rng) {
    const int n = chart->dim;
    Vec q(static_cast<std::size_t>(n));
    for (int attempt = 0; attempt < 10000; ++attempt) {
        for (double& qi : q) qi = rng.uniform(-2.0, 2.0);
        if (chart->domain(q)) {
            Vec qd(static_cast<std::size_t>(n)), qdd(static_cast<std::size_t>(n));
            for (double& x : qd) x = rng.uniform(-3.0, 3.0);
            for (double& x : qdd) x = rng.uniform(-3.0, 3.0);
            return {chart, q, qd, qdd};
        }
    }
    throw DomainError("randomJet: rejection sampling failed on chart " + chart->name);
}

} // namespace covel

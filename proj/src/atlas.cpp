#include "covel/atlas.hpp"

#include <cmath>
#include <map>
#include <numbers>

namespace covel {

namespace {

constexpr double kPi = std::numbers::pi;

bool allFiniteDomain(std::span<const double> q) { return allFinite(q); }

ChartPtr buildChart(const std::string& key) {
    if (key == "r1" || key == "r2" || key == "r3") {
        int n = key[1] - '0';
        return makeChart(key, n, allFiniteDomain);
    }
    if (key == "s1-a")
        return makeChart(key, 1, [](std::span<const double> q) {
            return allFinite(q) && q[0] > -kPi && q[0] < kPi;
        });
    if (key == "s1-b")
        return makeChart(key, 1, [](std::span<const double> q) {
            return allFinite(q) && q[0] > 0.0 && q[0] < 2.0 * kPi;
        });
    if (key == "s2-angles")
        return makeChart(key, 2, [](std::span<const double> q) {
            return allFinite(q) && q[0] > kSphereCap && q[0] < kPi - kSphereCap;
        });
    if (key == "s2-stereo-north" || key == "s2-stereo-south") return makeChart(key, 2, allFiniteDomain);
    if (key == "t2") return makeChart(key, 2, allFiniteDomain);
    throw ConfigError("unknown chart key: " + key);
}

} // namespace

ChartPtr catalogChart(const std::string& key) {
    static std::map<std::string, ChartPtr> cache;
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    ChartPtr c = buildChart(key);
    cache.emplace(key, c);
    return c;
}

std::vector<std::string> catalogChartKeys() {
    return {"r1", "r2", "r3", "s1-a", "s1-b", "s2-angles", "s2-stereo-north", "s2-stereo-south", "t2"};
}

Transition circleAToB() {
    auto from = catalogChart("s1-a");
    auto to = catalogChart("s1-b");
    // Branch chosen by the primal part: the overlap is two disjoint arcs.
    auto forward = SmoothMap(1, 1, []<TowerScalar T>(std::span<const T> q) {
        std::vector<T> r{q[0]};
        if (primalValue(q[0]) < 0.0) r[0] = r[0] + 2.0 * kPi;
        return r;
    });
    auto inverse = SmoothMap(1, 1, []<TowerScalar T>(std::span<const T> q) {
        std::vector<T> r{q[0]};
        if (primalValue(q[0]) > kPi) r[0] = r[0] - 2.0 * kPi;
        return r;
    });
    auto overlap = [](std::span<const double> q) { return q[0] != 0.0 && std::abs(q[0]) < kPi; };
    return Transition{from, to, std::move(forward), std::move(inverse), overlap};
}

Transition sphereStereoNorthToSouth() {
    auto from = catalogChart("s2-stereo-north");
    auto to = catalogChart("s2-stereo-south");
    // Plane inversion; it is its own inverse.
    auto invert = SmoothMap(2, 2, []<TowerScalar T>(std::span<const T> q) {
        T rho2 = q[0] * q[0] + q[1] * q[1];
        return std::vector<T>{q[0] / rho2, q[1] / rho2};
    });
    auto overlap = [](std::span<const double> q) { return q[0] * q[0] + q[1] * q[1] > 1e-6; };
    return Transition{from, to, invert, invert, overlap};
}

Transition sphereAnglesToStereoNorth() {
    auto from = catalogChart("s2-angles");
    auto to = catalogChart("s2-stereo-north");
    auto forward = SmoothMap(2, 2, []<TowerScalar T>(std::span<const T> q) {
        using std::cos;
        using std::sin;
        T s = sin(q[0]);
        T scale = s / (1.0 - cos(q[0]));
        return std::vector<T>{scale * cos(q[1]), scale * sin(q[1])};
    });
    auto inverse = SmoothMap(2, 2, []<TowerScalar T>(std::span<const T> q) {
        using std::acos;
        using std::atan2;
        T rho2 = q[0] * q[0] + q[1] * q[1];
        T z = (rho2 - 1.0) / (rho2 + 1.0);
        return std::vector<T>{acos(z), atan2(q[1], q[0])};
    });
    // Principal branch of atan2: stay away from the phi seam and the caps.
    auto overlap = [](std::span<const double> q) {
        return q[0] > kSphereCap + 0.03 && q[0] < kPi - kSphereCap - 0.03 && std::abs(q[1]) < kPi - 0.05;
    };
    return Transition{from, to, std::move(forward), std::move(inverse), overlap};
}

} // namespace covel

#pragma once

#include <optional>

#include "covel/catalog.hpp"
#include "covel/config.hpp"
#include "covel/report.hpp"

namespace covel {

struct ScenarioResult {
    Json report;
    bool pass = false;
    std::optional<std::string> trajectoryCsvContent;
};

// Execute a validated scenario. Deterministic given the config (including
// numeric.seed): byte-identical reports on repeated runs unless
// output.include_runtime = true opts into wall-clock timing.
ScenarioResult runScenario(const ScenarioConfig& cfg);

// Builders shared by runScenario and the test suites. The connection kinds:
//   flat | constant-torsion | levi-civita | contorsion | expr
// levi-civita/contorsion read connection.metric; constant-torsion reads
// optional numeric connection.gamma.K.I.J entries (1-based); expr reads
// expression-valued connection.gamma.K.I.J over q1..qn; contorsion reads
// optional numeric connection.contorsion.K.I.J entries, antisymmetric in
// (I, J).
ChristoffelField buildConnection(const ConfigMap& cfg, const ChartPtr& chart);
LagrangianField buildLagrangian(const ConfigMap& cfg, const ChartPtr& chart);

std::string describeCatalog();

} // namespace covel

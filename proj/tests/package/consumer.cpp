// SPDX-License-Identifier: Apache-2.0
//
// mirs: max-min rate design for uplink multi-IRS MIMO cells.
// ------------------------------------------------------------------------
//
// Builds against the installed package and runs one tiny optimization.

#include <iostream>

#include "mirs/bench.hpp"

int main() {
  const mirs::ExperimentPlan plan = mirs::parse_config(
      "scenario: {num_irs: 1, num_bs_antennas: 2, elements_per_irs: 2, users_per_irs: 1, tx_power_dbm: 0}\n"
      "solver: {max_iterations: 2, randomizations: 10}\n");
  const mirs::ExperimentResult r = mirs::run_experiment(plan, 1);
  mirs::emit_csv(r.records, std::cout);
  return r.records.size() == 1 && r.failures.empty() ? 0 : 1;
}

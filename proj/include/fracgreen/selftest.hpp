#pragma once

#include <string>
#include <vector>

namespace fracgreen {

enum class Level { Quick, Full };

/// One row of the self-test table. Notes carry the measured deviations; they
/// never contain timings, so reports are byte-identical between runs.
struct Check {
  int id = 0;
  std::string name;
  bool pass = false;
  std::vector<std::string> notes;
};

Check check_gaussian(Level level);
Check check_neutral(Level level);
Check check_cross_routes(Level level);
Check check_normalization(Level level);
Check check_moments(Level level);
Check check_laplace(Level level);
Check check_reductions(Level level);
Check check_tail(Level level);
Check check_reflection(Level level);
/// Re-runs checks 1-9 on one worker and compares the report text with
/// `reference`; also compares CSV and solver output between 1 and 4 workers.
Check check_determinism(Level level, const std::string& reference);
/// Mittag-Leffler identities and method agreement.
Check check_ml_identities(Level level);
/// Mass evolution, delta initial data against the density, solve against convolution.
Check check_solver(Level level);

/// Checks 1-9 on four workers, then the determinism check, then the extras.
std::vector<Check> run_selftest(Level level);

std::string format_check(const Check& c);
std::string format_report(const std::vector<Check>& checks);

}  // namespace fracgreen

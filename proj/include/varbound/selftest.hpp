#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <varbound/types.hpp>
#include <varbound/variance_qp.hpp>

namespace varbound {
namespace selftest {

// One expected-vs-computed comparison inside a suite.
struct Check {
    std::string name;
    double expected = 0.0;
    double computed = 0.0;
    double tol = 0.0;
    bool pass = false;
    double seconds = 0.0;  // wall time spent producing `computed`
};

struct Report {
    std::string suite;
    std::vector<Check> checks;
    bool ok() const;
    double total_seconds() const;
};

// Fixed qutrit observables exercised by the golden suites.  Kept here (not in
// the tests) so the CLI `verify` subcommand and the test binaries check the
// exact same instances.
CMatrix ladder_diag();           // diag(-1, 0, 1)
CMatrix antisym_yz();            // [[0,0,0],[0,0,i],[0,-i,0]]
CMatrix offdiag_mix();           // [[0,1,0],[1,0,i],[0,-i,0]]
CMatrix shifted_ladder(double t);// [[-1,0,t],[0,0,0],[t,0,1]]
CMatrix dense_a();               // [[1,0,1],[0,-1,-i],[1,i,0]]
CMatrix dense_b();               // [[0,1,-i],[1,0,1],[i,1,0]]
CMatrix spin1_x();
CMatrix spin1_y();
CMatrix spin1_z();

// Frozen target for the (dense_a, dense_b) pair.  Two independent minimizers
// agree on this value to 4e-16: direct multi-start pure-state minimization and
// a scan of min_{x,y} lambda_min((A-x)^2 + (B-y)^2) over real shifts.
inline constexpr double kDenseMin = 0.3185389356;

// Golden suites.  Each returns one Check per verified quantity.
Report qubit_suite(std::uint64_t seed, int count = 100);
Report qutrit_suite(const SolverConfig& cfg);
Report table_suite(const SolverConfig& cfg);
Report ht_suite(const SolverConfig& cfg);

// All of the above with shared config; order: qubit, qutrit, table, ht.
std::vector<Report> all_suites(const SolverConfig& cfg, std::uint64_t seed);

}  // namespace selftest
}  // namespace varbound

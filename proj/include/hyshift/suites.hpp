#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hyshift {

// Outcome of one randomized oracle suite. A case passes when it is decided
// and agrees with its oracle; undecided cases count as failures.
struct SuiteResult {
    std::string name;
    std::uint64_t seed = 0;
    int count = 0;
    int passed = 0;
    int undecided = 0;
    std::vector<std::string> failures;  // one line per failing case, capped

    bool ok() const { return passed == count; }
};

// Both sides of the liminf / theta equivalence on random eventually periodic
// weights over l^2 (period <= 8, prefix <= 8, log-weights in [-2, 2]).
SuiteResult verify_condn(std::uint64_t seed, int count = 200);

// The same equivalence over entire and rapid (J in 1..3, m <= 4).
SuiteResult verify_prop44(std::uint64_t seed, int count = 100);

// Block certificates of random periodic weights, transformed into growth
// constants and checked against exact tail minima for n <= 64.
SuiteResult verify_certtransform(std::uint64_t seed, int count = 50);

// Expanded against iterated polynomial powers (d <= 4, n <= 8, support <= 128).
SuiteResult verify_polyorbit(std::uint64_t seed, int count = 100);

std::vector<std::string> suite_names();
SuiteResult run_suite(const std::string& name, std::uint64_t seed, int count);  // count <= 0: default

}  // namespace hyshift

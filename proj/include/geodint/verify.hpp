#pragma once

// Seeded randomized property suites, shared by the command line tool and the
// acceptance harness.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace geodint::verify {

struct Check {
  std::string name;
  bool passed = false;
  double value = 0.0;  // worst observed quantity
  double limit = 0.0;
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<Check> checks;
  bool passed() const noexcept;
};

const std::vector<std::string>& suite_names();

// Throws Error(Config) for an unknown suite.
SuiteReport run_suite(std::string_view suite, std::uint64_t seed);

// Endpoint of 100 steps against the closed-form flow on 20 random linear
// systems (d <= 6, ||A|| <= 2, h <= 0.5), every locally exact scheme and policy.
SuiteReport linear(std::uint64_t seed);
// Probe defect of every locally exact scheme at h = 0.3 on the pendulum and
// Henon-Heiles, and the gap of the classical baselines.
SuiteReport local_exactness(std::uint64_t seed);
// theta^T = S^{-1} theta S on 50 random Hamiltonian Hessians.
SuiteReport theta_form(std::uint64_t seed);
// <grad H, dy> = dH on 1000 random pairs per problem, the consistency limit,
// the linearization splitting and the tanhc/xcothx reciprocal identity.
SuiteReport gradient_identity(std::uint64_t seed);
// One step forward and back from 100 random states.
SuiteReport reversibility(std::uint64_t seed);
// 1000 steps at h = 0.5 from every registry equilibrium.
SuiteReport fixed_points(std::uint64_t seed);

}  // namespace geodint::verify

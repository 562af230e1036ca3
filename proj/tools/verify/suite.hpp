#pragma once

#include <span>
#include <string>
#include <vector>

namespace tq::verify {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

using CheckList = std::vector<CheckResult>;

// Parameterized checks, shared between the CLI verify verb and the
// acceptance suite (which runs some of them at larger scales).
CheckResult check_log_domain();
CheckResult check_state_ops();
CheckResult check_branch_metric();
CheckResult check_exact_vs_brute_force(int instances, double tol);
CheckResult check_exact_vs_linear_dp(int instances, double tol);
CheckResult check_code_siso_vs_enumeration(int n_info, double tol);
CheckResult check_encoder();
CheckResult check_degenerate_budgets(double tol);
CheckResult check_m_bcjr_vs_pruned_dp(int instances, double tol);
CheckResult check_mstar_vs_linear_transcription(int instances, double tol);
CheckResult check_flow_conservation(int blocks, double rel_tol);
CheckResult check_flow_negative_control();
CheckResult check_mass_preservation(int blocks, double tol);
// One-sided completion support: must never happen for mstar over the given
// budgets; the m algorithm at its smallest budget must show at least one.
CheckResult check_branch_balance(int blocks, std::span<const int> mstar_budgets,
                                 int m_negative_budget);
CheckResult check_rs_structure();
CheckResult check_mstar_branch_count();
CheckResult check_brute_force_guard();
CheckResult check_interleaver();
CheckResult check_mapping();
CheckResult check_channel_model();
CheckResult check_noise_calibration();
CheckResult check_noiseless_loopback(int blocks);
CheckResult check_turbo_determinism();
CheckResult check_sweep_determinism();

// Every check at verification scale. Any failure means a nonzero CLI exit.
CheckList run_verification_suite();

bool all_passed(const CheckList& results);

}  // namespace tq::verify

/**
 * @file cli.hpp
 * @brief Command-line front end: integrate, order and bench subcommands.
 */
#pragma once

#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace odekit::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 1;
inline constexpr int exit_numerical = 2;

/// euler, rk4, rk54_ck, dopri5, dopri5_dense, implicit_euler, symplectic_euler.
std::vector<std::string> stepper_names();

/// args excludes the program name. Regular output goes to out, diagnostics
/// and usage text to err.
int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace odekit::cli

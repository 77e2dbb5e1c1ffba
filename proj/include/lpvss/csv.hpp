#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "lpvss/innovation.hpp"
#include "lpvss/model.hpp"

namespace lpvss {

struct SimRecord;
struct DecayCurve;

/// Shortest decimal form that parses back to the identical double.
std::string format_double(double x);

/// Strict decimal parse; rejects NaN/Inf, trailing garbage, empty fields.
double parse_double(const std::string& field, const std::string& context);

/// Signals file, one row per time step: t,p_1..p_np,u_1..u_nu,y_1..y_ny
void write_signals_csv(const std::filesystem::path& path, const SimRecord& record);

struct SignalsData {
  int t0 = 0;
  std::vector<Vector> p, u, y;
};

SignalsData read_signals_csv(const std::filesystem::path& path, int np, int nu, int ny);

SchedulingTrajectory read_scheduling_csv(const std::filesystem::path& path, int np);
std::vector<Vector> read_input_csv(const std::filesystem::path& path, int nu);

/// Filter trace file, one row per time step: t, then K_t, P_{t|t-1}, Omega_t
/// vectorized in column-major order; columns named K_r_c / P_r_c / Om_r_c.
void write_trace_csv(const std::filesystem::path& path, const FilterTrace& trace);

/// Decay curve file: tau,stat,remainder_norm,cov_norm,decay_fraction with
/// stat in {max, median}; decay_fraction sits on the row of the larger tau of
/// each adjacent pair and is empty elsewhere.
void write_decay_csv(const std::filesystem::path& path, const DecayCurve& curve);

}  // namespace lpvss

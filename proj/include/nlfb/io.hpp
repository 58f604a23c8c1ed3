#pragma once

#include "nlfb/classify.hpp"
#include "nlfb/moving_solver.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace nlfb {

/// 17 significant digits, dot decimal separator regardless of locale; "nan"/"inf" spelled out.
std::string format_double(double v);

/// Writes to a sibling temporary file and renames it over the target, so readers
/// never see a partial file. Creates missing parent directories. Throws Error(Io).
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

/// Header t,g,h,gdot,hdot,sup_u,sup_v,u_center,v_center.
std::string trajectory_csv(const Trajectory& traj);

/// Long format, one row per node of every stored snapshot: t,i,x,u,v.
std::string snapshots_csv(const Trajectory& traj);

/// Header a,d1,d2,h0,mu,rho,kind,verdict,certificate,final_length,sup_u,sup_v,lambda_p_final.
std::string phase_table_csv(const PhaseTable& table);

}  // namespace nlfb

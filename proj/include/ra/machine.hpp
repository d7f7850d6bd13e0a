#ifndef RA_MACHINE_HPP
#define RA_MACHINE_HPP

#include <optional>
#include <string>

#include "ra/trajectory.hpp"

namespace ra {

enum class MachineMode { CpuSingleThread, CpuMultiThread, Gpu };

// Declared PassMark ratings of the executing machine. Scores come from a user
// spec file, never from auto-detection.
struct MachineSpec {
    double cpu_mark_single = 0.0;
    std::optional<double> cpu_mark_multi;
    int num_cpu = 1;
    std::optional<double> gpu_g3d;
    std::optional<double> gpu_g2d;
    int num_gpu = 0;
    MachineMode mode = MachineMode::CpuSingleThread;
};

// Reference-machine score the budgets and times are standardized to:
// 2000 for the CPU modes, 9960 for GPU, unless overridden.
struct ReferenceBase {
    double score = 0.0;
    std::string derivation;

    static ReferenceBase for_mode(MachineMode mode);
    static ReferenceBase custom(double score);
};

MachineMode parse_machine_mode(const std::string& text);  // cpu-single | cpu-multi | gpu
std::string machine_mode_name(MachineMode mode);

// PassMark score of the machine for its mode. GPU mode combines CPU and GPU
// marks: s = (#CPU * CPU_Mark + #GPU * (G3D + G2D) / 2) / 2.
// Throws std::invalid_argument when required marks are missing.
double machine_score(const MachineSpec& spec);

// Budget on this machine for a reference budget T: T * s_base / s.
double normalize_budget(double t_max, double score, double base_score);

// Measured time mapped back to the reference machine: t * s / s_base.
double renormalize_time(double t, double score, double base_score);

// Applies renormalize_time to every entry and the budget, and marks the
// trajectory as normalized.
Trajectory renormalize_trajectory(Trajectory trajectory, double score, double base_score);

// Key = value spec file with the MachineSpec fields plus `mode`.
MachineSpec parse_machine_spec(const std::string& text);
MachineSpec load_machine_spec(const std::string& path);

// Short identification string recorded with results, e.g. "cpu-single:2714/base:2000".
std::string machine_fingerprint(const MachineSpec& spec, const ReferenceBase& base);

}  // namespace ra

#endif

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "smag/evolve.hpp"
#include "smag/experiments.hpp"
#include "smag/regimes.hpp"

namespace smag {

// Flat dotted-key run configuration. Every key is optional and falls back to
// the default below; unknown keys, duplicate keys, malformed values, and
// ic.* keys that do not apply to the chosen ic.kind are rejected. The single
// sim.seed drives all randomness (it is forwarded into the random initial
// condition).
struct RunConfig {
    SimParams sim;

    std::string out_path;         // io.out; empty writes to stdout
    std::string checkpoint_path;  // io.checkpoint; empty disables
    long checkpoint_at_step = 0;  // io.checkpoint_at_step; 0 checkpoints at the end

    std::string exp_kind;  // exp.kind in {scaling, decay, logsob, amplitude, picard-cross}
    int exp_lambda = 2;
    double exp_s_low = 1.0;
    double exp_logsob_s = 2.0;
    std::vector<int> exp_shells{8, 16, 32, 64};
    std::vector<double> exp_amplitudes{2.0, 4.0, 8.0, 16.0};
    int exp_compare_points = 4;

    int picard_points = 64;
    double picard_tol_rel = 1e-8;
    int picard_max_iters = 50;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// Builds the experiment named by exp.kind from the config; ConfigError when
// exp.kind is empty or unknown.
ExperimentSpec make_experiment(const RunConfig& cfg);

//--- NDJSON diagnostics --------------------------------------------------

// One JSON object per line, numbers carrying 17 significant digits so they
// parse back bitwise. The header line echoes the flat config and the regime
// classification; record lines use the fixed key set {"t", "M", "H",
// "u_Ha2", "u_Hd2p1", "b_Hs", "b_H1", "b_Lp", "energy_residual",
// "cont_integral", "arnold_margin"}, with H and arnold_margin null when
// d = 2. Lines include the trailing newline.
std::string header_line(const RunConfig& cfg, const RegimeReport& regime);
std::string diagnostics_line(const DiagnosticsRecord& r, int d);

// Presentation names shared by the NDJSON header and the CLI.
const char* lwp_case_name(LwpCase c);
const char* scaling_class_name(ScalingClass c);

//--- checkpoints -----------------------------------------------------------

std::uint64_t fnv1a64(const void* data, std::size_t nbytes);

// Structured-text header (format version, SimParams echo, resume point,
// endianness tag, payload byte count, FNV-1a content hash) followed by the
// raw little-endian complex coefficients, component-major then row-major
// wavenumber order. The initial-condition settings are not stored: the
// payload is the state, and resume never rebuilds the IC. Round trips are
// bitwise lossless; load verifies the hash.
struct Checkpoint {
    SimParams sim;
    ResumePoint rp;
    SpectralVectorField field;
};

void save_checkpoint(const std::string& path, const Checkpoint& ck);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace smag

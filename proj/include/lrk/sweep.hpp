#pragma once

// Grid sweeps over one or two model parameters with CSV output and a JSON
// manifest. Content is independent of the worker count.

#include <filesystem>
#include <string>
#include <vector>

#include "lrk/correlators.hpp"

namespace lrk {

enum class SweepOutput { gap, xi, profile, entropy, scaling };

std::string to_string(SweepOutput o);
/// Throws InvalidInput for unknown names.
SweepOutput parse_sweep_output(const std::string& name);

struct SweepAxis {
    std::string name;  ///< mu, t, delta, alpha or beta
    double start = 0.0;
    double stop = 0.0;
    int steps = 2;

    [[nodiscard]] double value(int i) const;
};

/// "name:start:stop:steps".
SweepAxis parse_sweep_axis(const std::string& text);

struct SweepSpec {
    std::vector<SweepAxis> axes;  ///< at most 2; none means a single point
    ModelParams fixed{};
    bool lock_beta = false;       ///< beta follows alpha at every point
    std::vector<SweepOutput> outputs{SweepOutput::gap};
    std::filesystem::path output_dir;
    int workers = 1;
    int budget = 10000;
    int d_max = 200;
    int tail_run = 16;
    int l_max = 64;
    int scaling_d_max = 8;
    QuadratureConfig quad{};

    [[nodiscard]] std::size_t points() const;
    /// Parameters at grid index (first axis outermost).
    [[nodiscard]] ModelParams point(std::size_t index) const;
    void validate() const;
};

struct PointFailure {
    std::size_t index = 0;
    std::string output;
    std::string reason;
};

struct SweepFile {
    std::string name;
    std::string hash;  ///< FNV-1a 64, hex
    std::size_t rows = 0;
};

struct SweepResult {
    std::vector<SweepFile> files;
    std::vector<PointFailure> failures;
    double wall_seconds = 0.0;
};

/// Evaluates every grid point (static partition over workers), writes one
/// CSV per output plus manifest.json into spec.output_dir.
SweepResult run_sweep(const SweepSpec& spec);

}  // namespace lrk

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "codesign/config.hpp"
#include "codesign/optimizer.hpp"

namespace codesign {

/// CSV with header `iter,part,v,compliance,ratio,G,tau,inner_iters`.
void writeTraceCsv(std::ostream& out, const OptimizationTrace& trace);
void writeTraceCsv(const std::string& path, const OptimizationTrace& trace);

/// Checkpoint callback writing per-iteration designs (and sensitivity fields when
/// enabled) below `directory/checkpoints/iter_NNNN/`.
CheckpointFn makeCheckpointWriter(const std::string& directory, const Assembly& assembly, const OutputConfig& outputs);

/// Final designs, trace CSV, SVG convergence charts and a plain-text summary.
void writeRunOutputs(const std::string& directory, const Assembly& assembly, const OptimizationTrace& trace,
                     const OutputConfig& outputs);

/// Initial-state fields of every part: density, compliance TSF, collision field,
/// collision sensitivity and augmented field, as PGM and grid text. Returns the file paths written.
std::vector<std::string> exportFields(const std::string& directory, const Assembly& assembly);

} // namespace codesign

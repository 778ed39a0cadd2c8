#pragma once

namespace codesign {

/// Worker count for internal loops: CODESIGN_THREADS when set and positive,
/// otherwise the OpenMP default (1 without OpenMP).
int threadCount();

} // namespace codesign

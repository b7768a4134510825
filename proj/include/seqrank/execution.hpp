#pragma once

namespace seqrank {

// Selects between the OpenMP kernel and the serial reference path. Both paths
// produce bit-identical results; the serial one is kept for testing and for
// single-threaded builds.
enum class Execution { serial, parallel };

}  // namespace seqrank

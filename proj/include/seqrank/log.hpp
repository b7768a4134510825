#pragma once

#include <functional>
#include <string>
#include <string_view>

namespace seqrank::log {

enum class Level { debug, info, warn, error };

using Sink = std::function<void(Level, std::string_view)>;

// Replaces the process-wide sink and returns the previous one. The default
// sink writes warn and above to std::clog.
Sink set_sink(Sink sink);

void write(Level level, std::string_view message);

inline void warn(std::string_view message) { write(Level::warn, message); }
inline void info(std::string_view message) { write(Level::info, message); }

}  // namespace seqrank::log

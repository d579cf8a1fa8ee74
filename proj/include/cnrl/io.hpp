#pragma once

#include <functional>
#include <string>

namespace cnrl {

/// Writes through a temporary file in the target directory and renames into
/// place, so an interrupted run never leaves a partial artifact. The writer
/// receives an open stream; any exception removes the temporary file.
void write_file_atomic(const std::string& path, const std::function<void(std::ostream&)>& writer);

}  // namespace cnrl
